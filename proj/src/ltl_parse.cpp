#include "promod/errors.hpp"
#include "promod/ltl.hpp"

#include <cctype>
#include <functional>

namespace promod {

namespace ltl {

namespace {
FormulaPtr make(LtlFormula::Kind kind, FormulaPtr lhs = nullptr, FormulaPtr rhs = nullptr) {
    auto f = std::make_shared<LtlFormula>();
    f->kind = kind;
    f->lhs = std::move(lhs);
    f->rhs = std::move(rhs);
    return f;
}
} // namespace

FormulaPtr boolean(bool value) {
    return make(value ? LtlFormula::Kind::True : LtlFormula::Kind::False);
}
FormulaPtr atom(Predicate p) {
    auto f = std::make_shared<LtlFormula>();
    f->kind = LtlFormula::Kind::Pred;
    f->pred = std::move(p);
    return f;
}
FormulaPtr negation(FormulaPtr f) { return make(LtlFormula::Kind::Not, std::move(f)); }
FormulaPtr conj(FormulaPtr a, FormulaPtr b) {
    return make(LtlFormula::Kind::And, std::move(a), std::move(b));
}
FormulaPtr disj(FormulaPtr a, FormulaPtr b) {
    return make(LtlFormula::Kind::Or, std::move(a), std::move(b));
}
FormulaPtr implies(FormulaPtr a, FormulaPtr b) {
    return make(LtlFormula::Kind::Implies, std::move(a), std::move(b));
}
FormulaPtr finally_(FormulaPtr f) { return make(LtlFormula::Kind::Finally, std::move(f)); }
FormulaPtr globally(FormulaPtr f) { return make(LtlFormula::Kind::Globally, std::move(f)); }
FormulaPtr next(FormulaPtr f) { return make(LtlFormula::Kind::Next, std::move(f)); }
FormulaPtr until(FormulaPtr a, FormulaPtr b) {
    return make(LtlFormula::Kind::Until, std::move(a), std::move(b));
}

} // namespace ltl

namespace {

struct Token {
    enum class Type {
        Finally, Globally, Until, Next, Not, And, Or, Implies,
        LParen, RParen, Cmp, Ident, Int, End
    };
    Type type = Type::End;
    std::string text;
    Cmp cmp = Cmp::Eq;
    std::int64_t value = 0;
    std::size_t pos = 0;
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) { advance(); }
    const Token& peek() const { return current_; }
    Token take() {
        Token t = current_;
        advance();
        return t;
    }

private:
    void advance() {
        while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_]))) ++i_;
        current_ = Token{};
        current_.pos = i_;
        if (i_ >= text_.size()) return;

        auto two = text_.substr(i_, 2);
        auto emit = [&](Token::Type type, std::size_t len) {
            current_.type = type;
            current_.text = std::string(text_.substr(i_, len));
            i_ += len;
        };
        auto emit_cmp = [&](Cmp c, std::size_t len) {
            current_.type = Token::Type::Cmp;
            current_.cmp = c;
            current_.text = std::string(text_.substr(i_, len));
            i_ += len;
        };

        if (two == "<>") return emit(Token::Type::Finally, 2);
        if (two == "[]") return emit(Token::Type::Globally, 2);
        if (two == "->") return emit(Token::Type::Implies, 2);
        if (two == "&&") return emit(Token::Type::And, 2);
        if (two == "||") return emit(Token::Type::Or, 2);
        if (two == "==") return emit_cmp(Cmp::Eq, 2);
        if (two == "!=") return emit_cmp(Cmp::Ne, 2);
        if (two == "<=") return emit_cmp(Cmp::Le, 2);
        if (two == ">=") return emit_cmp(Cmp::Ge, 2);

        const char c = text_[i_];
        if (c == '<') return emit_cmp(Cmp::Lt, 1);
        if (c == '>') return emit_cmp(Cmp::Gt, 1);
        if (c == '!') return emit(Token::Type::Not, 1);
        if (c == '(') return emit(Token::Type::LParen, 1);
        if (c == ')') return emit(Token::Type::RParen, 1);

        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '-' && i_ + 1 < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[i_ + 1])))) {
            std::size_t start = i_;
            if (c == '-') ++i_;
            while (i_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i_]))) ++i_;
            current_.type = Token::Type::Int;
            current_.text = std::string(text_.substr(start, i_ - start));
            current_.value = std::stoll(current_.text);
            current_.pos = start;
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = i_;
            while (i_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[i_])) ||
                                         text_[i_] == '_'))
                ++i_;
            std::string word(text_.substr(start, i_ - start));
            current_.pos = start;
            if (word == "U") {
                current_.type = Token::Type::Until;
            } else if (word == "X") {
                current_.type = Token::Type::Next;
            } else {
                current_.type = Token::Type::Ident;
            }
            current_.text = std::move(word);
            return;
        }
        throw LtlSyntaxError(i_, std::string("unexpected character '") + c + "'");
    }

    std::string_view text_;
    std::size_t i_ = 0;
    Token current_;
};

Cmp flip(Cmp c) {
    switch (c) {
    case Cmp::Eq: return Cmp::Eq;
    case Cmp::Ne: return Cmp::Ne;
    case Cmp::Lt: return Cmp::Gt;
    case Cmp::Le: return Cmp::Ge;
    case Cmp::Gt: return Cmp::Lt;
    case Cmp::Ge: return Cmp::Le;
    }
    return c;
}

bool compare(std::int64_t lhs, Cmp c, std::int64_t rhs) {
    switch (c) {
    case Cmp::Eq: return lhs == rhs;
    case Cmp::Ne: return lhs != rhs;
    case Cmp::Lt: return lhs < rhs;
    case Cmp::Le: return lhs <= rhs;
    case Cmp::Gt: return lhs > rhs;
    case Cmp::Ge: return lhs >= rhs;
    }
    return false;
}

class Parser {
public:
    explicit Parser(std::string_view text) : lex_(text) {}

    FormulaPtr parse() {
        auto f = parse_implies();
        if (lex_.peek().type != Token::Type::End)
            throw LtlSyntaxError(lex_.peek().pos, "trailing input");
        return f;
    }

private:
    FormulaPtr parse_implies() {
        auto lhs = parse_or();
        if (lex_.peek().type == Token::Type::Implies) {
            lex_.take();
            return ltl::implies(std::move(lhs), parse_implies()); // right-assoc
        }
        return lhs;
    }
    FormulaPtr parse_or() {
        auto lhs = parse_and();
        while (lex_.peek().type == Token::Type::Or) {
            lex_.take();
            lhs = ltl::disj(std::move(lhs), parse_and());
        }
        return lhs;
    }
    FormulaPtr parse_and() {
        auto lhs = parse_until();
        while (lex_.peek().type == Token::Type::And) {
            lex_.take();
            lhs = ltl::conj(std::move(lhs), parse_until());
        }
        return lhs;
    }
    FormulaPtr parse_until() {
        auto lhs = parse_unary();
        if (lex_.peek().type == Token::Type::Until) {
            lex_.take();
            return ltl::until(std::move(lhs), parse_until()); // right-assoc
        }
        return lhs;
    }
    FormulaPtr parse_unary() {
        switch (lex_.peek().type) {
        case Token::Type::Not: lex_.take(); return ltl::negation(parse_unary());
        case Token::Type::Finally: lex_.take(); return ltl::finally_(parse_unary());
        case Token::Type::Globally: lex_.take(); return ltl::globally(parse_unary());
        case Token::Type::Next: lex_.take(); return ltl::next(parse_unary());
        default: return parse_atom();
        }
    }
    FormulaPtr parse_atom() {
        const Token& t = lex_.peek();
        switch (t.type) {
        case Token::Type::LParen: {
            lex_.take();
            auto f = parse_implies();
            if (lex_.peek().type != Token::Type::RParen)
                throw LtlSyntaxError(lex_.peek().pos, "expected ')'");
            lex_.take();
            return f;
        }
        case Token::Type::Ident: {
            Token var = lex_.take();
            if (var.text == "true") return ltl::boolean(true);
            if (var.text == "false") return ltl::boolean(false);
            Token op = expect_cmp();
            Token rhs = lex_.take();
            if (rhs.type != Token::Type::Int)
                throw LtlSyntaxError(rhs.pos, "expected an integer after the comparator");
            return ltl::atom({var.text, op.cmp, rhs.value});
        }
        case Token::Type::Int: {
            Token lhs = lex_.take();
            Token op = expect_cmp();
            Token rhs = lex_.take();
            if (rhs.type == Token::Type::Int)
                return ltl::boolean(compare(lhs.value, op.cmp, rhs.value));
            if (rhs.type == Token::Type::Ident) // const OP var: normalize to var OP' const
                return ltl::atom({rhs.text, flip(op.cmp), lhs.value});
            throw LtlSyntaxError(rhs.pos, "expected a variable or integer after the comparator");
        }
        default:
            throw LtlSyntaxError(t.pos, "expected a formula");
        }
    }
    Token expect_cmp() {
        Token op = lex_.take();
        if (op.type != Token::Type::Cmp)
            throw LtlSyntaxError(op.pos, "expected a comparison operator");
        return op;
    }

    Lexer lex_;
};

} // namespace

FormulaPtr parse_ltl(std::string_view text) { return Parser(text).parse(); }

namespace {

const char* cmp_str(Cmp c) {
    switch (c) {
    case Cmp::Eq: return "==";
    case Cmp::Ne: return "!=";
    case Cmp::Lt: return "<";
    case Cmp::Le: return "<=";
    case Cmp::Gt: return ">";
    case Cmp::Ge: return ">=";
    }
    return "==";
}

void print(const LtlFormula& f, std::string& out) {
    using K = LtlFormula::Kind;
    auto paren = [&](const LtlFormula& sub) {
        out += '(';
        print(sub, out);
        out += ')';
    };
    switch (f.kind) {
    case K::True: out += "true"; break;
    case K::False: out += "false"; break;
    case K::Pred:
        out += f.pred.variable;
        out += ' ';
        out += cmp_str(f.pred.cmp);
        out += ' ';
        out += std::to_string(f.pred.constant);
        break;
    case K::Not: out += "! "; paren(*f.lhs); break;
    case K::Finally: out += "<> "; paren(*f.lhs); break;
    case K::Globally: out += "[] "; paren(*f.lhs); break;
    case K::Next: out += "X "; paren(*f.lhs); break;
    case K::And: paren(*f.lhs); out += " && "; paren(*f.rhs); break;
    case K::Or: paren(*f.lhs); out += " || "; paren(*f.rhs); break;
    case K::Implies: paren(*f.lhs); out += " -> "; paren(*f.rhs); break;
    case K::Until: paren(*f.lhs); out += " U "; paren(*f.rhs); break;
    }
}

} // namespace

std::string to_string(const LtlFormula& f) {
    std::string out;
    print(f, out);
    return out;
}

std::vector<std::string> formula_variables(const LtlFormula& f) {
    std::set<std::string> seen;
    std::function<void(const LtlFormula&)> walk = [&](const LtlFormula& node) {
        if (node.kind == LtlFormula::Kind::Pred) seen.insert(node.pred.variable);
        if (node.lhs) walk(*node.lhs);
        if (node.rhs) walk(*node.rhs);
    };
    walk(f);
    return {seen.begin(), seen.end()};
}

bool eval_predicate(const Predicate& p, const Valuation& v) {
    auto it = v.find(p.variable);
    if (it == v.end()) throw UnknownVariableError(p.variable);
    return compare(it->second, p.cmp, p.constant);
}

} // namespace promod
