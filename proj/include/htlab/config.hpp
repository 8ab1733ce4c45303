#pragma once

#include <vector>

#include "htlab/padic.hpp"
#include "htlab/witt.hpp"

namespace htlab {

struct Cutoffs {
  int D = 5;       // pd degree
  int T = 6;       // t order
  int Dy = 4;      // Y degree / chart degree
  int n_max = 32;  // horizon for convergence products
  int s_max = 4;   // bound on the p-shift of rational coefficients
};

struct BaseConfig {
  Int p = 0;
  std::vector<Int> E_coeffs;  // full coefficient list of E(u), lowest first
  int f = 1;
  int N = 0;
  Cutoffs cutoffs;

  const OkRing* ring = nullptr;
  const WittRing* witt = nullptr;
  OkElem dE;    // E'(pi)
  OkElem beta;  // pi * E'(pi)

  int e() const { return ring->e(); }
  OkElem pi() const { return OkElem::pi(*ring); }
  // The twist constant for the log (beta) or smooth (E'(pi)) theory.
  OkElem alpha(bool log) const { return log ? beta : dE; }
};

BaseConfig make_base_config(Int p, std::vector<Int> E_coeffs, int f, int precision, Cutoffs cutoffs = {});

}  // namespace htlab
