#pragma once

#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "qca/tensor.hpp"

namespace qca {

/// Matrix-product operator. Site tensors carry axes
/// (left bond, physical out, physical in, right bond) with physical
/// dimension 2 (basis index 0 = empty, 1 = occupied) and unit boundary bonds.
struct Mpo {
  std::vector<Tensor> sites;

  int length() const { return static_cast<int>(sites.size()); }
  int max_bond() const;
};

/// Matrix-product state with axes (left bond, physical, right bond).
/// Doubled-space states carry physical dimension 4 with the fused index
/// 2*(out) + (in); that fusing convention is fixed across the codebase.
struct Mps {
  std::vector<Tensor> sites;
  std::optional<int> center;  // orthogonality center, when canonicalized

  int length() const { return static_cast<int>(sites.size()); }
  int max_bond() const;
};

struct CompressionPolicy {
  int chi = 64;                 // maximum bond dimension
  double svd_cutoff = 1e-14;    // relative squared-weight threshold per value
  double fit_tolerance = 1e-8;  // convergence gap on the total occupation
  int max_sweeps = 12;

  static CompressionPolicy unbounded() {
    CompressionPolicy p;
    p.chi = std::numeric_limits<int>::max();
    p.svd_cutoff = 0.0;
    return p;
  }
  bool is_unbounded() const { return chi == std::numeric_limits<int>::max(); }
  std::size_t chi_limit() const {
    return is_unbounded() ? kUnboundedRank : static_cast<std::size_t>(chi);
  }
  /// Bond cap for the contraction stage that precedes the fit. A zero cutoff
  /// requests exactness, so the cap is lifted; otherwise mid-contraction
  /// ranks are capped at twice chi (any weight dropped there is reported).
  std::size_t zip_limit() const {
    if (is_unbounded() || svd_cutoff == 0.0) return kUnboundedRank;
    return static_cast<std::size_t>(std::max(2 * chi, 64));
  }
};

void validate_mpo(const Mpo& m);
void validate_mps(const Mps& s);

cplx mpo_trace(const Mpo& m);
/// Tr(op_site * m) with identity closure on every other site; op is 2x2.
cplx mpo_local_expectation(const Mpo& m, int site, const Tensor& op);

Mps mpo_to_doubled_mps(const Mpo& m);
Mpo mps_to_mpo(const Mps& s);
/// Adjoint: conjugate site tensors and swap the physical legs.
Mpo mpo_dagger(const Mpo& m);
/// Same operation expressed on a doubled-space MPS.
Mps doubled_dagger(const Mps& s);

/// <a|b> by left-to-right transfer contraction (conjugation on a).
cplx mps_overlap(const Mps& a, const Mps& b);
double mps_norm(const Mps& s);

/// ||a - b||, computed on the explicit difference state so that nearly equal
/// inputs do not cancel through the overlap formula.
double mps_distance(const Mps& a, const Mps& b);

/// Tr(rho) evaluated on a doubled-space MPS.
cplx doubled_trace(const Mps& rho);
/// Tr(op_site * rho) on a doubled-space MPS.
cplx doubled_local_expectation(const Mps& rho, int site, const Tensor& op);
/// Sum of site occupations Tr(n_k rho), computed in one prefix/suffix pass.
cplx doubled_total_occupation(const Mps& rho);

/// Gauge sweep placing the orthogonality center at `center`.
Mps canonicalized(Mps s, int center);

/// Canonical-form truncation to the policy's bond and cutoff. Returns the
/// truncated state (center at site 0) and the cumulative discarded weight.
std::pair<Mps, double> mps_svd_truncate(const Mps& s, const CompressionPolicy& policy);

Mps mps_add(const Mps& a, const Mps& b);
Mps mps_scale(Mps s, cplx factor);
Mpo mpo_scale(Mpo m, cplx factor);

/// n-site product MPO with the same 2x2 operator on every site.
Mpo product_mpo(int n_sites, const Tensor& site_op);

}  // namespace qca
