#include "htlab/config.hpp"

namespace htlab {

BaseConfig make_base_config(Int p, std::vector<Int> E_coeffs, int f, int precision, Cutoffs cutoffs) {
  if (!zp::is_prime(p)) throw Error(ErrorKind::NotPrime, std::to_string(p) + " is not prime");
  if (precision < 2) throw Error(ErrorKind::PrecisionExhausted, "precision N must be at least 2");
  if (cutoffs.D < 1 || cutoffs.T < 1 || cutoffs.Dy < 1 || cutoffs.n_max < 1 || cutoffs.s_max < 0)
    throw Error(ErrorKind::BadIndex, "cutoffs must be positive");

  BaseConfig cfg;
  cfg.p = p;
  cfg.f = f;
  cfg.N = precision;
  cfg.cutoffs = cutoffs;
  cfg.ring = &OkRing::get(p, E_coeffs, precision);
  cfg.witt = &WittRing::get(p, f, precision);
  cfg.E_coeffs = std::move(E_coeffs);

  std::vector<Int> deriv;
  for (std::size_t i = 1; i < cfg.E_coeffs.size(); ++i) deriv.push_back(cfg.E_coeffs[i] * static_cast<Int>(i));
  cfg.dE = OkElem::from_coeffs(*cfg.ring, deriv);
  cfg.beta = cfg.pi() * cfg.dE;
  return cfg;
}

}  // namespace htlab
