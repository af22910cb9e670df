#ifndef LORENTZ_EMBEDDING_HPP
#define LORENTZ_EMBEDDING_HPP

#include "exponent.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lorentz {

/// The natural embedding id: l_{p,u}^n -> l_{q,v}^n.
struct EmbeddingSpec
{
    LorentzParams source;
    LorentzParams target;
    std::size_t   n = 1;

    void validate() const
    {
        if (n < 1) throw std::invalid_argument("embedding: n must be >= 1");
    }

    std::string to_string() const
    {
        return "l" + source.to_string() + "->l" + target.to_string() + " n=" + std::to_string(n);
    }
};

/// Parameter cells of the entropy asymptotics, plus the two classical l_p -> l_r shapes.
enum class CaseTag { zero, I, II, III_1, III_2, IV_1, IV_2, classical_le, classical_ge };

enum class Regime { small_k, mid_k, large_k };

inline const char* to_string(CaseTag c)
{
    switch (c) {
    case CaseTag::zero: return "0";
    case CaseTag::I: return "I";
    case CaseTag::II: return "II";
    case CaseTag::III_1: return "III.1";
    case CaseTag::III_2: return "III.2";
    case CaseTag::IV_1: return "IV.1";
    case CaseTag::IV_2: return "IV.2";
    case CaseTag::classical_le: return "classical-le";
    case CaseTag::classical_ge: return "classical-ge";
    }
    return "?";
}

inline const char* to_string(Regime r)
{
    switch (r) {
    case Regime::small_k: return "small-k";
    case Regime::mid_k: return "mid-k";
    case Regime::large_k: return "large-k";
    }
    return "?";
}

/// Which cell of the (p,q,u,v) parameter space the embedding falls in.
inline CaseTag classify(const LorentzParams& source, const LorentzParams& target)
{
    const Exponent& p = source.p;
    const Exponent& q = target.p;
    const Exponent& u = source.u;
    const Exponent& v = target.u;
    if (p != q) {
        if (p.is_finite() && q.is_finite()) return CaseTag::zero;
        return p.is_infinite() ? CaseTag::I : CaseTag::II;
    }
    if (p.is_finite()) return u <= v ? CaseTag::III_1 : CaseTag::III_2;
    return u >= v ? CaseTag::IV_1 : CaseTag::IV_2;
}

inline CaseTag classify(const EmbeddingSpec& spec) { return classify(spec.source, spec.target); }

/// Asymptotic envelope evaluated at one (k, n).
struct EnvelopeValue
{
    double      value = 0.0;
    CaseTag     tag   = CaseTag::zero;
    Regime      regime = Regime::small_k;
    std::size_t k     = 1;
    double      n     = 1.0;
};

} // namespace lorentz

#endif
