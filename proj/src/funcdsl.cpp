#include "qbss/funcdsl.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <vector>

namespace qbss {
namespace dsl {

enum class Kind { number, variable, unary_minus, binary, call };

struct Node {
    Kind kind;
    double number = 0.0;
    char op = 0;                 // + - * / ^ for binary
    std::string name;            // call target
    std::vector<std::shared_ptr<const Node>> args;
    int col_begin = 0;           // 1-based, inclusive
    int col_end = 0;             // 1-based, inclusive
};

namespace {

using NodePtr = std::shared_ptr<const Node>;

struct Builtin {
    int arity;
    double (*fn1)(double);
    double (*fn2)(double, double);
};

const std::map<std::string, Builtin, std::less<>>& callables() {
    static const std::map<std::string, Builtin, std::less<>> table = {
        {"sin", {1, [](double a) { return std::sin(a); }, nullptr}},
        {"cos", {1, [](double a) { return std::cos(a); }, nullptr}},
        {"exp", {1, [](double a) { return std::exp(a); }, nullptr}},
        {"abs", {1, [](double a) { return std::abs(a); }, nullptr}},
        {"sqrt", {1, nullptr, nullptr}}, // handled inline (domain check)
        {"min", {2, nullptr, [](double a, double b) { return std::min(a, b); }}},
        {"max", {2, nullptr, [](double a, double b) { return std::max(a, b); }}},
    };
    return table;
}

class Parser {
public:
    // `src` must outlive the parser and be NUL-terminated (strtod).
    Parser(const std::string& src, std::string_view var)
        : src_(src), var_(var) {}

    NodePtr run() {
        skip_ws();
        if (at_end())
            throw ParseError("empty expression", 1);
        NodePtr e = expression();
        skip_ws();
        if (!at_end())
            throw ParseError("unexpected trailing input", column());
        return e;
    }

private:
    std::string_view src_;
    std::string_view var_;
    std::size_t pos_ = 0;

    int column() const { return static_cast<int>(pos_) + 1; }
    bool at_end() const { return pos_ >= src_.size(); }
    char peek() const { return at_end() ? '\0' : src_[pos_]; }
    void skip_ws() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(src_[pos_])))
            ++pos_;
    }
    bool consume(char c) {
        skip_ws();
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expression() {
        NodePtr left = term();
        for (;;) {
            skip_ws();
            const char c = peek();
            if (c != '+' && c != '-')
                return left;
            ++pos_;
            NodePtr right = term();
            left = binary(c, left, right);
        }
    }

    NodePtr term() {
        NodePtr left = unary();
        for (;;) {
            skip_ws();
            const char c = peek();
            if (c != '*' && c != '/')
                return left;
            ++pos_;
            NodePtr right = unary();
            left = binary(c, left, right);
        }
    }

    NodePtr unary() {
        skip_ws();
        if (peek() == '-') {
            const int begin = column();
            ++pos_;
            NodePtr operand = unary();
            auto n = std::make_shared<Node>();
            n->kind = Kind::unary_minus;
            n->args = {operand};
            n->col_begin = begin;
            n->col_end = operand->col_end;
            return n;
        }
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        skip_ws();
        if (peek() == '^') {
            ++pos_;
            NodePtr exponent = unary(); // right-assoc; tighter than unary -
            return binary('^', base, exponent);
        }
        return base;
    }

    NodePtr primary() {
        skip_ws();
        if (at_end())
            throw ParseError("unexpected end of input", column());
        const char c = peek();
        if (c == '(') {
            ++pos_;
            NodePtr inner = expression();
            if (!consume(')'))
                throw ParseError("expected ')'", column());
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
            return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
            return identifier();
        throw ParseError(std::string("unexpected character '") + c + "'",
                         column());
    }

    NodePtr number() {
        const int begin = column();
        const char* start = src_.data() + pos_;
        char* after = nullptr;
        const double v = std::strtod(start, &after);
        if (after == start)
            throw ParseError("malformed number", begin);
        pos_ += static_cast<std::size_t>(after - start);
        auto n = std::make_shared<Node>();
        n->kind = Kind::number;
        n->number = v;
        n->col_begin = begin;
        n->col_end = column() - 1;
        return n;
    }

    NodePtr identifier() {
        const int begin = column();
        std::size_t len = 0;
        while (pos_ + len < src_.size()) {
            const char c = src_[pos_ + len];
            if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
                break;
            ++len;
        }
        const std::string_view name = src_.substr(pos_, len);
        pos_ += len;
        if (name == var_) {
            auto n = std::make_shared<Node>();
            n->kind = Kind::variable;
            n->col_begin = begin;
            n->col_end = column() - 1;
            return n;
        }
        const auto it = callables().find(name);
        if (it == callables().end())
            throw ParseError("unknown identifier '" + std::string(name) + "'",
                             begin);
        if (!consume('('))
            throw ParseError("expected '(' after function name", column());
        std::vector<NodePtr> args;
        args.push_back(expression());
        while (consume(','))
            args.push_back(expression());
        if (!consume(')'))
            throw ParseError("expected ')'", column());
        if (static_cast<int>(args.size()) != it->second.arity)
            throw ParseError("'" + std::string(name) + "' expects " +
                                 std::to_string(it->second.arity) +
                                 " argument(s)",
                             begin);
        auto n = std::make_shared<Node>();
        n->kind = Kind::call;
        n->name = std::string(name);
        n->args = std::move(args);
        n->col_begin = begin;
        n->col_end = column() - 1;
        return n;
    }

    static NodePtr binary(char op, NodePtr l, NodePtr r) {
        auto n = std::make_shared<Node>();
        n->kind = Kind::binary;
        n->op = op;
        n->args = {std::move(l), std::move(r)};
        n->col_begin = n->args[0]->col_begin;
        n->col_end = n->args[1]->col_end;
        return n;
    }
};

double check_finite(double v, const Node& n) {
    if (!std::isfinite(v))
        throw EvalError("non-finite result", n.col_begin, n.col_end);
    return v;
}

double eval_node(const Node& n, double x) {
    switch (n.kind) {
    case Kind::number:
        return n.number;
    case Kind::variable:
        return x;
    case Kind::unary_minus:
        return -eval_node(*n.args[0], x);
    case Kind::binary: {
        const double a = eval_node(*n.args[0], x);
        const double b = eval_node(*n.args[1], x);
        switch (n.op) {
        case '+': return check_finite(a + b, n);
        case '-': return check_finite(a - b, n);
        case '*': return check_finite(a * b, n);
        case '/':
            if (b == 0.0)
                throw EvalError("division by zero", n.col_begin, n.col_end);
            return check_finite(a / b, n);
        case '^': {
            if (a < 0.0 && b != std::floor(b))
                throw EvalError("non-integer power of a negative base",
                                n.col_begin, n.col_end);
            if (a == 0.0 && b < 0.0)
                throw EvalError("zero raised to a negative power",
                                n.col_begin, n.col_end);
            return check_finite(std::pow(a, b), n);
        }
        default: break;
        }
        break;
    }
    case Kind::call: {
        const auto& b = callables().at(n.name);
        if (n.name == "sqrt") {
            const double a = eval_node(*n.args[0], x);
            if (a < 0.0)
                throw EvalError("sqrt of a negative value", n.col_begin,
                                n.col_end);
            return std::sqrt(a);
        }
        if (b.arity == 1)
            return check_finite(b.fn1(eval_node(*n.args[0], x)), n);
        return check_finite(
            b.fn2(eval_node(*n.args[0], x), eval_node(*n.args[1], x)), n);
    }
    }
    throw std::logic_error("funcdsl: corrupt expression node");
}

void print_node(const Node& n, std::ostream& os, const std::string& var) {
    switch (n.kind) {
    case Kind::number: {
        std::ostringstream tmp;
        tmp.precision(17);
        tmp << n.number;
        os << tmp.str();
        return;
    }
    case Kind::variable:
        os << var;
        return;
    case Kind::unary_minus:
        os << "(-";
        print_node(*n.args[0], os, var);
        os << ")";
        return;
    case Kind::binary:
        os << "(";
        print_node(*n.args[0], os, var);
        os << n.op;
        print_node(*n.args[1], os, var);
        os << ")";
        return;
    case Kind::call:
        os << n.name << "(";
        for (std::size_t i = 0; i < n.args.size(); ++i) {
            if (i)
                os << ",";
            print_node(*n.args[i], os, var);
        }
        os << ")";
        return;
    }
}

} // namespace
} // namespace dsl

FuncExpr::FuncExpr(std::shared_ptr<const dsl::Node> root, std::string source,
                   std::string var)
    : root_(std::move(root)), source_(std::move(source)), var_(std::move(var)) {}

FuncExpr FuncExpr::parse(std::string_view source, std::string_view var) {
    std::string text(source);
    dsl::Parser parser(text, var);
    auto root = parser.run();
    return FuncExpr(std::move(root), std::move(text), std::string(var));
}

double FuncExpr::eval(double x) const { return dsl::eval_node(*root_, x); }

std::string FuncExpr::to_string() const {
    std::ostringstream os;
    dsl::print_node(*root_, os, var_);
    return os.str();
}

std::function<double(double)> FuncExpr::fn() const {
    return [root = root_](double x) { return dsl::eval_node(*root, x); };
}

const std::map<std::string, std::string, std::less<>>& builtin_functions() {
    static const std::map<std::string, std::string, std::less<>> table = {
        {"const1", "1"},
        {"ident", "x"},
        {"square", "x^2"},
        {"sat", "x/(1+x)"},
        {"sinx", "sin(x)"},
        {"absshift", "abs(x-1)"},
    };
    return table;
}

FuncExpr make_function(std::string_view text) {
    const auto& reg = builtin_functions();
    const auto it = reg.find(text);
    if (it != reg.end())
        return FuncExpr::parse(it->second);
    return FuncExpr::parse(text);
}

} // namespace qbss
