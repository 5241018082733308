#pragma once

#include <optional>
#include <string>

#include "bilattice/measures.hpp"
#include "bilattice/painleve.hpp"

namespace bilattice {

/// Parsed command configuration.  Rationals are kept exact; they are
/// converted to binary once per working precision.
struct RunConfig {
    FamilyParams params = FamilyParams::charlier(Rational(1), Rational(1));
    LatticeSpec lattice = LatticeSpec::plain();
    long N = 20;
    long digits = 60;
    long loss_rate = 12;
    std::optional<Rational> tail_eps;
    long sig_digits = 30;  // significant digits in emitted tables
    std::string format = "csv";
    std::string out_path;  // empty = stdout

    PrecisionPolicy policy() const {
        PrecisionPolicy pol;
        pol.base_digits = digits;
        pol.loss_rate = loss_rate;
        pol.tail_eps = tail_eps;
        return pol;
    }

    PrecisionContext context() const {
        return tail_eps ? PrecisionContext(digits, *tail_eps) : PrecisionContext(digits);
    }
};

inline Family parse_family(const std::string& s) {
    if (s == "charlier") return Family::GeneralizedCharlier;
    if (s == "meixner") return Family::GeneralizedMeixner;
    throw ValidityError("unknown family '" + s + "' (expected charlier or meixner)");
}

inline LatticeSpec parse_lattice(const std::string& kind, const std::string& t_text) {
    if (kind == "plain") return LatticeSpec::plain();
    if (kind == "shifted") return LatticeSpec::shifted();
    if (kind == "bi") {
        if (t_text == "inf" || t_text == "infinity") return LatticeSpec::bi_infinite_t();
        return LatticeSpec::bi(Rational::parse(t_text));
    }
    throw ValidityError("unknown lattice '" + kind + "' (expected plain, shifted or bi)");
}

}  // namespace bilattice
