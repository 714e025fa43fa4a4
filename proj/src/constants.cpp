#include "conc/constants.hpp"

#include <stdexcept>

#include "json.hpp"

namespace conc {

namespace {

nlohmann::json rational_json(const Rational& q) {
    return {{"num", q.get_num().get_str()},
            {"den", q.get_den().get_str()},
            {"decimal", q.get_d()}};
}

}  // namespace

ConstantsReport constants(const Rational& gamma) {
    if (gamma < 5) throw std::invalid_argument("constants: gamma must be >= 5");
    ConstantsReport rep;
    rep.gamma = gamma;
    Rational four_thirds(4, 3), two_thirds(2, 3);
    rep.K = (7 + 4 * gamma - four_thirds) / two_thirds;
    rep.K_tilde = (5 + 4 * gamma - four_thirds) / two_thirds;
    rep.w2 = 2 * rep.K_tilde + 1;
    mpz_class ceil_kt;
    mpz_cdiv_q(ceil_kt.get_mpz_t(), rep.K_tilde.get_num().get_mpz_t(),
               rep.K_tilde.get_den().get_mpz_t());
    rep.w2_rounded = 2 * Rational(ceil_kt) + 1;
    return rep;
}

std::string ConstantsReport::to_json(int indent) const {
    nlohmann::json j;
    j["gamma"] = rational_json(gamma);
    j["K"] = rational_json(K);
    j["K_tilde"] = rational_json(K_tilde);
    j["w2"] = rational_json(w2);
    j["w2_rounded"] = rational_json(w2_rounded);
    return j.dump(indent);
}

}  // namespace conc
