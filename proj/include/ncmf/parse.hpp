#pragma once

#include <cctype>
#include <string>
#include <vector>

#include "algebra.hpp"

namespace ncmf {

/// Syntax tree of the polynomial grammar
///   expr   = ["-"] term (("+"|"-") term)*
///   term   = coeff ("*" factor)* | factor ("*" factor)*
///   factor = x<k> | x<k>^<m>
/// Factor order is the noncommutative word order; coefficients follow the
/// field's literal syntax.
struct ParsedPolynomial {
    struct Term {
        FieldElem coeff;
        Word word; // 0-based generator indices, exponents expanded
    };
    std::vector<Term> terms;
};

namespace detail {

class PolyParser {
public:
    PolyParser(const std::string& text, const AlgebraPtr& algebra)
        : text_(text), algebra_(algebra) {}

    ParsedPolynomial parse() {
        ParsedPolynomial out;
        skip_ws();
        bool negative = false;
        if (peek() == '-' || peek() == '+') {
            negative = take() == '-';
            skip_ws();
        }
        out.terms.push_back(parse_term(negative));
        skip_ws();
        while (pos_ < text_.size()) {
            char op = peek();
            if (op != '+' && op != '-')
                throw SyntaxError(pos_, std::string("expected '+' or '-', got '") + op + "'");
            take();
            skip_ws();
            out.terms.push_back(parse_term(op == '-'));
            skip_ws();
        }
        return out;
    }

private:
    const std::string& text_;
    AlgebraPtr algebra_;
    std::size_t pos_ = 0;

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    char take() { return text_[pos_++]; }
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    ParsedPolynomial::Term parse_term(bool negative) {
        const FieldSpec& field = algebra_->field();
        FieldElem coeff = FieldElem::one(field);
        Word word;
        skip_ws();
        if (std::isdigit(static_cast<unsigned char>(peek()))) {
            coeff = parse_coeff();
        } else if (peek() == 'x') {
            parse_factor(word);
        } else {
            throw SyntaxError(pos_, "expected coefficient or generator");
        }
        skip_ws();
        while (peek() == '*') {
            take();
            skip_ws();
            parse_factor(word);
            skip_ws();
        }
        if (negative) coeff = -coeff;
        return {coeff, std::move(word)};
    }

    FieldElem parse_coeff() {
        std::size_t start = pos_;
        while (std::isdigit(static_cast<unsigned char>(peek()))) take();
        if (peek() == '/') {
            if (!algebra_->field().is_rationals())
                throw SyntaxError(pos_, "'/' literals are only valid over Q");
            take();
            if (!std::isdigit(static_cast<unsigned char>(peek())))
                throw SyntaxError(pos_, "expected denominator digits");
            while (std::isdigit(static_cast<unsigned char>(peek()))) take();
        }
        return FieldElem::parse(algebra_->field(), text_.substr(start, pos_ - start));
    }

    void parse_factor(Word& word) {
        if (peek() != 'x') throw SyntaxError(pos_, "expected generator 'x<k>'");
        take();
        if (!std::isdigit(static_cast<unsigned char>(peek())))
            throw SyntaxError(pos_, "expected generator index after 'x'");
        long k = parse_int();
        if (k < 1 || k > algebra_->generator_count())
            throw UnknownGenerator("x" + std::to_string(k));
        long m = 1;
        if (peek() == '^') {
            take();
            if (!std::isdigit(static_cast<unsigned char>(peek())))
                throw SyntaxError(pos_, "expected exponent digits after '^'");
            m = parse_int();
            if (m < 1) throw SyntaxError(pos_, "exponent must be >= 1");
        }
        for (long i = 0; i < m; ++i) word.push_back(static_cast<int>(k - 1));
    }

    long parse_int() {
        std::size_t start = pos_;
        while (std::isdigit(static_cast<unsigned char>(peek()))) take();
        return std::stol(text_.substr(start, pos_ - start));
    }
};

} // namespace detail

inline ParsedPolynomial parse_polynomial(const std::string& text, const AlgebraPtr& algebra) {
    return detail::PolyParser(text, algebra).parse();
}

/// Parses into a normal-form element; throws InhomogeneousInput when nonzero
/// terms have different word lengths.
inline AlgebraElement parse_poly(const std::string& text, const AlgebraPtr& algebra) {
    ParsedPolynomial ast = parse_polynomial(text, algebra);
    int degree = -1;
    for (const auto& term : ast.terms) {
        if (term.coeff.is_zero()) continue;
        if (degree < 0) degree = static_cast<int>(term.word.size());
        else if (degree != static_cast<int>(term.word.size())) throw InhomogeneousInput();
    }
    if (degree < 0) return AlgebraElement::zero(algebra, 0);
    AlgebraElement out(algebra, degree);
    for (const auto& term : ast.terms)
        if (!term.coeff.is_zero()) out.add_term(term.coeff, term.word);
    return out;
}

/// Canonical print; parse_poly(print_poly(e)) == e.
inline std::string print_poly(const AlgebraElement& e) { return e.str(); }

} // namespace ncmf
