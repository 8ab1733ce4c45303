#pragma once

// Seeded random Higgs data that is valid by construction.
//
// Each basis vector gets a chain label and a level w. A is diagonal with
// entry b_chain + alpha * w, so [Theta, A] = alpha Theta holds for any Theta
// supported on pairs (j, k) of one chain with w_k = w_j + 1. The result is
// then conjugated by a random unimodular integer matrix.

#include <random>
#include <string>
#include <vector>

#include "htlab/cohomology.hpp"
#include "htlab/config.hpp"
#include "htlab/higgs.hpp"

namespace testgen {

using namespace htlab;

struct HiggsShape {
  HiggsFlavor flavor = HiggsFlavor::AbsGeom;
  int rank = 2;
  int d = 1;
  Twist twist = Twist::Log;
  bool chart = false;     // coefficients in a chart ring instead of O_K
  bool rational = false;  // Theta with a p^{-1} factor
};

struct CorpusItem {
  BaseConfig cfg;
  HiggsData h;
  std::string label;
};

BaseConfig random_base(std::mt19937_64& rng, int N, int max_e = 2);
ChartElem random_chart(std::mt19937_64& rng, const ChartCtx& ctx, bool small);
HiggsData random_higgs(std::mt19937_64& rng, const BaseConfig& cfg, const HiggsShape& shape);

// Mixed corpus of abs-geom data: rank <= max_rank, d <= max_d, p in {2,3,5},
// e <= 2, with some chart and rational items.
std::vector<CorpusItem> higgs_corpus(std::uint64_t seed, int count, int max_rank = 3, int max_d = 2, int N = 8);

GroupElt random_group_elt(std::mt19937_64& rng, const BaseConfig& cfg, int d);

// |ker| and |coker| of a square matrix acting on (O_K / p^2)^l, by listing
// every vector.
struct EnumeratedSizes {
  Int kernel = 0;
  Int cokernel = 0;
};
EnumeratedSizes enumerate_mod_p2(const OkMatrix& phi);

}  // namespace testgen
