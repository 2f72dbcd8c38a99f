#include "cegal/pctl.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>

#include "cegal/errors.hpp"

namespace cegal {
namespace pctl {

StateFormulaPtr make_true() {
    auto f = std::make_shared<StateFormula>();
    f->kind = StateFormula::Kind::True;
    return f;
}

StateFormulaPtr make_atom(std::string label) {
    auto f = std::make_shared<StateFormula>();
    f->kind = StateFormula::Kind::Atom;
    f->label = std::move(label);
    return f;
}

StateFormulaPtr make_not(StateFormulaPtr child) {
    auto f = std::make_shared<StateFormula>();
    f->kind = StateFormula::Kind::Not;
    f->child = std::move(child);
    return f;
}

StateFormulaPtr make_and(StateFormulaPtr l, StateFormulaPtr r) {
    auto f = std::make_shared<StateFormula>();
    f->kind = StateFormula::Kind::And;
    f->lhs = std::move(l);
    f->rhs = std::move(r);
    return f;
}

StateFormulaPtr make_prob(Comparison cmp, double threshold,
                          std::shared_ptr<const PathFormula> path) {
    if (!(threshold >= 0.0 && threshold <= 1.0))
        throw InvalidModel("probability threshold must lie in [0,1]");
    auto f = std::make_shared<StateFormula>();
    f->kind = StateFormula::Kind::Prob;
    f->cmp = cmp;
    f->threshold = threshold;
    f->path = std::move(path);
    return f;
}

std::shared_ptr<const PathFormula> make_until(StateFormulaPtr left, StateFormulaPtr right,
                                              std::optional<int> bound) {
    if (bound && *bound < 1) throw InvalidModel("until bound must be at least 1");
    auto p = std::make_shared<PathFormula>();
    p->kind = PathFormula::Kind::Until;
    p->left = std::move(left);
    p->right = std::move(right);
    p->bound = bound;
    return p;
}

std::shared_ptr<const PathFormula> make_next(StateFormulaPtr operand) {
    auto p = std::make_shared<PathFormula>();
    p->kind = PathFormula::Kind::Next;
    p->right = std::move(operand);
    return p;
}

bool equal(const StateFormula& a, const StateFormula& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case StateFormula::Kind::True:
            return true;
        case StateFormula::Kind::Atom:
            return a.label == b.label;
        case StateFormula::Kind::Not:
            return equal(*a.child, *b.child);
        case StateFormula::Kind::And:
            return equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
        case StateFormula::Kind::Prob: {
            if (a.cmp != b.cmp || a.threshold != b.threshold) return false;
            const auto& pa = *a.path;
            const auto& pb = *b.path;
            if (pa.kind != pb.kind || pa.bound != pb.bound) return false;
            if (pa.kind == PathFormula::Kind::Next) return equal(*pa.right, *pb.right);
            return equal(*pa.left, *pb.left) && equal(*pa.right, *pb.right);
        }
    }
    return false;
}

namespace {

// Recursive-descent parser over a small hand-rolled lexer. Offsets are byte
// positions into the original text, reported with every ParseError.
class Parser {
public:
    explicit Parser(const std::string& text) : text_(text) {}

    StateFormulaPtr parse_top() {
        skip_ws();
        auto f = parse_state();
        skip_ws();
        if (pos_ != text_.size()) throw ParseError("trailing input", pos_);
        return f;
    }

private:
    const std::string& text_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c, const char* what) {
        if (!eat(c)) throw ParseError(std::string("expected ") + what, pos_);
    }

    bool peek_word(const char* w) {
        skip_ws();
        std::size_t len = std::char_traits<char>::length(w);
        if (text_.compare(pos_, len, w) != 0) return false;
        const std::size_t end = pos_ + len;
        if (end < text_.size()) {
            const char next = text_[end];
            if (std::isalnum(static_cast<unsigned char>(next)) || next == '_') return false;
        }
        return true;
    }

    bool eat_word(const char* w) {
        if (!peek_word(w)) return false;
        pos_ += std::char_traits<char>::length(w);
        return true;
    }

    Comparison parse_comparison() {
        skip_ws();
        if (text_.compare(pos_, 2, "<=") == 0) { pos_ += 2; return Comparison::LessEq; }
        if (text_.compare(pos_, 2, ">=") == 0) { pos_ += 2; return Comparison::GreaterEq; }
        if (pos_ < text_.size() && text_[pos_] == '<') { ++pos_; return Comparison::Less; }
        if (pos_ < text_.size() && text_[pos_] == '>') { ++pos_; return Comparison::Greater; }
        throw ParseError("expected comparison operator (<=, >=, <, >)", pos_);
    }

    double parse_number() {
        skip_ws();
        const char* begin = text_.c_str() + pos_;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) throw ParseError("expected a number", pos_);
        pos_ += static_cast<std::size_t>(end - begin);
        return v;
    }

    int parse_int() {
        skip_ws();
        int value = 0;
        auto [ptr, ec] = std::from_chars(text_.c_str() + pos_, text_.c_str() + text_.size(), value);
        if (ec != std::errc()) throw ParseError("expected an integer", pos_);
        pos_ = static_cast<std::size_t>(ptr - text_.c_str());
        return value;
    }

    std::string parse_quoted_label() {
        // opening quote already consumed
        std::string out;
        while (pos_ < text_.size() && text_[pos_] != '"') out.push_back(text_[pos_++]);
        if (pos_ == text_.size()) throw ParseError("unterminated label", pos_);
        ++pos_;
        if (out.empty()) throw ParseError("empty label", pos_);
        return out;
    }

    StateFormulaPtr parse_prob() {
        // 'P' already consumed
        const Comparison cmp = parse_comparison();
        const double threshold = parse_number();
        if (!(threshold >= 0.0 && threshold <= 1.0))
            throw ParseError("probability threshold outside [0,1]", pos_);
        expect('[', "'['");
        std::shared_ptr<const PathFormula> path;
        if (eat_word("X")) {
            path = make_next(parse_state());
        } else {
            auto left = parse_state();
            if (!eat_word("U")) throw ParseError("expected 'U'", pos_);
            std::optional<int> bound;
            skip_ws();
            if (text_.compare(pos_, 2, "<=") == 0) {
                pos_ += 2;
                const int b = parse_int();
                if (b < 1) throw ParseError("step bound must be at least 1", pos_);
                bound = b;
            }
            path = make_until(std::move(left), parse_state(), bound);
        }
        expect(']', "']'");
        return make_prob(cmp, threshold, std::move(path));
    }

    // state := conj ; conj := unary ('&' unary)* ; unary := '!' unary | atom
    StateFormulaPtr parse_state() { return parse_conj(); }

    StateFormulaPtr parse_conj() {
        auto f = parse_unary();
        while (eat('&')) f = make_and(std::move(f), parse_unary());
        return f;
    }

    StateFormulaPtr parse_unary() {
        if (eat('!')) return make_not(parse_unary());
        return parse_atom();
    }

    StateFormulaPtr parse_atom() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
        if (eat('(')) {
            auto f = parse_state();
            expect(')', "')'");
            return f;
        }
        if (eat('"')) return make_atom(parse_quoted_label());
        if (eat_word("true")) return make_true();
        if (eat_word("P")) return parse_prob();
        throw ParseError("expected 'true', a quoted label, '!', '(' or 'P'", pos_);
    }
};

std::string shortest_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

const char* comparison_text(Comparison c) {
    switch (c) {
        case Comparison::LessEq: return "<=";
        case Comparison::GreaterEq: return ">=";
        case Comparison::Less: return "<";
        case Comparison::Greater: return ">";
    }
    return "<=";
}

// Printing precedence: atoms bind tightest, then '!', then '&'.
void print_state(const StateFormula& f, std::string& out, bool parenthesize_and) {
    switch (f.kind) {
        case StateFormula::Kind::True:
            out += "true";
            return;
        case StateFormula::Kind::Atom:
            out += '"';
            out += f.label;
            out += '"';
            return;
        case StateFormula::Kind::Not:
            out += '!';
            print_state(*f.child, out, /*parenthesize_and=*/true);
            return;
        case StateFormula::Kind::And: {
            if (parenthesize_and) out += '(';
            print_state(*f.lhs, out, /*parenthesize_and=*/false);
            out += " & ";
            print_state(*f.rhs, out, /*parenthesize_and=*/false);
            if (parenthesize_and) out += ')';
            return;
        }
        case StateFormula::Kind::Prob: {
            out += 'P';
            out += comparison_text(f.cmp);
            out += shortest_double(f.threshold);
            out += " [ ";
            const auto& p = *f.path;
            if (p.kind == PathFormula::Kind::Next) {
                out += "X ";
                print_state(*p.right, out, false);
            } else {
                print_state(*p.left, out, false);
                out += " U";
                if (p.bound) {
                    out += "<=";
                    out += std::to_string(*p.bound);
                }
                out += ' ';
                print_state(*p.right, out, false);
            }
            out += " ]";
            return;
        }
    }
}

} // namespace

StateFormulaPtr parse(const std::string& text) { return Parser(text).parse_top(); }

std::string to_string(const StateFormula& f) {
    std::string out;
    print_state(f, out, false);
    return out;
}

StateFormulaPtr bounded_reach_bound(double p_star, int bound, const std::string& label) {
    return make_prob(Comparison::LessEq, p_star, make_until(make_true(), make_atom(label), bound));
}

namespace {

void evaluate_into(const StateFormula& f, const Dtmc& chain, std::vector<char>& out) {
    const int n = chain.n_states();
    switch (f.kind) {
        case StateFormula::Kind::True:
            out.assign(n, 1);
            return;
        case StateFormula::Kind::Atom: {
            if (!chain.has_label(f.label))
                throw UnknownLabel("label '" + f.label + "' is not defined by the model");
            out.assign(n, 0);
            for (int s : chain.label_states(f.label)) out[s] = 1;
            return;
        }
        case StateFormula::Kind::Not: {
            evaluate_into(*f.child, chain, out);
            for (auto& v : out) v = v ? 0 : 1;
            return;
        }
        case StateFormula::Kind::And: {
            std::vector<char> rhs;
            evaluate_into(*f.lhs, chain, out);
            evaluate_into(*f.rhs, chain, rhs);
            for (int s = 0; s < n; ++s) out[s] = out[s] && rhs[s];
            return;
        }
        case StateFormula::Kind::Prob:
            throw UnsupportedFormula("nested probability operators are not supported");
    }
}

} // namespace

std::vector<char> evaluate_states(const StateFormula& f, const Dtmc& chain) {
    std::vector<char> out;
    evaluate_into(f, chain, out);
    return out;
}

} // namespace pctl
} // namespace cegal
