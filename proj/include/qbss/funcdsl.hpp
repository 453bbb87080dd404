#pragma once

#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qbss {

/// Syntax/identifier/arity problem found while parsing; column is 1-based.
struct ParseError : std::runtime_error {
    ParseError(const std::string& what, int col)
        : std::runtime_error(what + " at column " + std::to_string(col)),
          column(col) {}
    int column;
};

/// Runtime evaluation problem (pole, sqrt of a negative, non-finite result);
/// carries the 1-based column span of the offending subexpression.
struct EvalError : std::runtime_error {
    EvalError(const std::string& what, int b, int e)
        : std::runtime_error(what + " in columns " + std::to_string(b) + ".." +
                             std::to_string(e)),
          begin(b), end(e) {}
    int begin;
    int end;
};

namespace dsl { struct Node; }

/// Parsed, immutable scalar function of one variable. Evaluation is pure and
/// the expression can be shared freely across threads.
class FuncExpr {
public:
    /// Grammar: + - * / ^ (right-assoc, binds tighter than unary -), unary -,
    /// parentheses, calls sin cos exp abs sqrt min max, decimal literals and
    /// the single variable `var`. No implicit multiplication.
    static FuncExpr parse(std::string_view source, std::string_view var = "x");

    double eval(double x) const;
    std::string to_string() const; // fully parenthesized, reparses identically
    const std::string& source() const { return source_; }
    std::function<double(double)> fn() const;

private:
    FuncExpr(std::shared_ptr<const dsl::Node> root, std::string source,
             std::string var);
    std::shared_ptr<const dsl::Node> root_;
    std::string source_;
    std::string var_;
};

/// Named test functions used throughout the experiments:
/// const1, ident, square, sat = x/(1+x), sinx, absshift = |x-1|.
const std::map<std::string, std::string, std::less<>>& builtin_functions();

/// Looks `text` up among the builtins, else parses it as an expression.
FuncExpr make_function(std::string_view text);

} // namespace qbss
