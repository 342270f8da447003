#include "twistforge/kodaira.hpp"

#include <sstream>

namespace twistforge {

std::string KodairaType::str() const {
    using F = Family;
    switch (family) {
        case F::I: return "I" + std::to_string(n);
        case F::II: return "II";
        case F::III: return "III";
        case F::IV: return "IV";
        case F::IStar: return "I" + std::to_string(n) + "*";
        case F::IVStar: return "IV*";
        case F::IIIStar: return "III*";
        case F::IIStar: return "II*";
    }
    throw error("KodairaType: bad family");
}

KodairaType KodairaType::parse(const std::string& s) {
    if (s == "II") return II();
    if (s == "III") return III();
    if (s == "IV") return IV();
    if (s == "II*") return IIStar();
    if (s == "III*") return IIIStar();
    if (s == "IV*") return IVStar();
    if (s.size() >= 2 && s[0] == 'I' && (std::isdigit(s[1]) != 0)) {
        bool star = s.back() == '*';
        std::string digits = s.substr(1, s.size() - 1 - (star ? 1 : 0));
        for (char ch : digits)
            if (!std::isdigit(ch)) throw parse_error("bad Kodaira symbol '" + s + "'");
        long n = std::stol(digits);
        return star ? IStar(n) : I(n);
    }
    throw parse_error("bad Kodaira symbol '" + s + "'");
}

long component_count(const KodairaType& t) {
    using F = KodairaType::Family;
    switch (t.family) {
        case F::I: return t.n > 0 ? t.n : 1;
        case F::II: return 1;
        case F::III: return 2;
        case F::IV: return 3;
        case F::IStar: return t.n + 5;
        case F::IVStar: return 7;
        case F::IIIStar: return 8;
        case F::IIStar: return 9;
    }
    throw error("component_count: bad family");
}

std::string reduction_str(ReductionKind k) {
    switch (k) {
        case ReductionKind::Good: return "good";
        case ReductionKind::SplitMultiplicative: return "split_multiplicative";
        case ReductionKind::NonsplitMultiplicative: return "nonsplit_multiplicative";
        case ReductionKind::Additive: return "additive";
    }
    throw error("reduction_str: bad kind");
}

ReductionKind reduction_parse(const std::string& s) {
    if (s == "good") return ReductionKind::Good;
    if (s == "split_multiplicative") return ReductionKind::SplitMultiplicative;
    if (s == "nonsplit_multiplicative") return ReductionKind::NonsplitMultiplicative;
    if (s == "additive") return ReductionKind::Additive;
    throw parse_error("bad reduction kind '" + s + "'");
}

void LocalData::validate() const {
    if (m != component_count(type)) throw error("LocalData: m inconsistent with type");
    if (f != delta - m + 1) throw error("LocalData: Ogg's formula violated");
    if (c < 1) throw error("LocalData: c < 1");
    if (type.is_good()) {
        if (reduction != ReductionKind::Good || c != 1 || delta != 0)
            throw error("LocalData: bad I0 data");
    } else if (type.is_multiplicative()) {
        if (reduction == ReductionKind::SplitMultiplicative) {
            if (c != type.n) throw error("LocalData: split I_n needs c = n");
        } else if (reduction == ReductionKind::NonsplitMultiplicative) {
            if (c != 2 - (type.n % 2)) throw error("LocalData: nonsplit I_n needs c = 2-(n mod 2)");
        } else {
            throw error("LocalData: I_n needs multiplicative reduction kind");
        }
    } else {
        if (reduction != ReductionKind::Additive) throw error("LocalData: additive type mismatch");
        if (c > 4) throw error("LocalData: additive c > 4");
    }
    if (c > m) throw error("LocalData: c > m");
}

std::string LocalData::str() const {
    std::ostringstream os;
    os << type.str() << " delta=" << delta << " f=" << f << " c=" << c << " m=" << m << " "
       << reduction_str(reduction);
    return os.str();
}

LocalData make_local_data(const KodairaType& t, long delta, long c, ReductionKind red) {
    LocalData d;
    d.type = t;
    d.delta = delta;
    d.m = component_count(t);
    d.f = delta - d.m + 1;
    d.c = c;
    d.reduction = red;
    d.validate();
    return d;
}

}  // namespace twistforge
