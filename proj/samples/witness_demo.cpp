// Classifies diag(0, 1, 2, delta) for a few non-real delta and prints the
// corner statistics of the witness projection.

#include <cstdio>

#include "offdiag/classify.hpp"

int main() {
  using namespace offdiag;
  for (cplx delta : {cplx{0, 1}, cplx{1, 1}, cplx{0, 2}}) {
    CMatrix t = CMatrix::Zero(4, 4);
    t.diagonal() << 0.0, 1.0, 2.0, delta;
    const ClassificationReport r = classify(t);
    const Witness& w = *r.witness;
    std::printf("delta = %g%+gi: CN %s, CR %s, rank NE %ld / SW %ld, norm gap %.6f\n", delta.real(), delta.imag(),
                std::string(to_string(r.verdict_cn)).c_str(), std::string(to_string(r.verdict_cr)).c_str(),
                static_cast<long>(w.rank_ne), static_cast<long>(w.rank_sw), w.norm_gap());
  }
}
