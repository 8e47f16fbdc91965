#include "qca/network.hpp"

#include <algorithm>
#include <stdexcept>

namespace qca {

namespace {

// Forward frontier through a traced control: F (r, gk, b, gb) -> (r, gk', b', gb').
Tensor step_control(const Tensor& f, const NetworkSite& site) {
  Tensor a = contract(f, site.base, {{2, 0}});             // (r, gk, gb, o, i, b')
  Tensor out = contract(a, site.kernel, {{1, 0}, {2, 1}, {3, 2}, {4, 3}});  // (r, b', gk', gb')
  return permute(out, {0, 2, 1, 3});
}

// Forward frontier through a target with its physical pair closed by op.
Tensor step_target_closed(const Tensor& f, const NetworkSite& site, const Tensor& op) {
  Tensor a = contract(f, site.kernel, {{1, 0}, {3, 1}});   // (r, b, o, i, gk', gb')
  // Tr(op rho) closes as sum op[i,o] rho[o,i].
  Tensor out = contract(a, op, {{2, 1}, {3, 0}});          // (r, b, gk', gb')
  return permute(out, {0, 2, 1, 3});
}

// Backward frontier (from the right edge): same shapes, mirrored contractions.
Tensor step_control_back(const Tensor& f, const NetworkSite& site) {
  // f (r, gk', b', gb') with primes on the right side of the control.
  Tensor a = contract(site.base, f, {{3, 2}});             // (b, o, i, r, gk', gb')
  Tensor out = contract(a, site.kernel, {{1, 2}, {2, 3}, {4, 4}, {5, 5}});  // (b, r, gk, gb)
  return permute(out, {1, 2, 0, 3});
}

Tensor step_target_closed_back(const Tensor& f, const NetworkSite& site, const Tensor& op) {
  Tensor a = contract(site.kernel, f, {{4, 1}, {5, 3}});   // (gk, gb, o, i, r, b)
  Tensor out = contract(a, op, {{2, 1}, {3, 0}});          // (gk, gb, r, b)
  return permute(out, {2, 0, 3, 1});
}

Tensor unit_frontier() {
  Tensor f({1, 1, 1, 1});
  f.data[0] = 1.0;
  return f;
}

}  // namespace

cplx network_trace(const TwoLayerNetwork& net) {
  const Tensor id = Tensor::identity(2);
  Tensor f = unit_frontier();
  for (const auto& site : net.sites)
    f = site.traced ? step_control(f, site) : step_target_closed(f, site, id);
  return f.data[0];
}

std::vector<cplx> network_site_expectations(const TwoLayerNetwork& net, const Tensor& op) {
  const Tensor id = Tensor::identity(2);
  const int n = static_cast<int>(net.sites.size());

  // prefix[p]: forward frontier covering sites < p; suffix[p]: backward
  // frontier covering sites >= p. Both close physical pairs with identities.
  std::vector<Tensor> prefix(n + 1), suffix(n + 1);
  prefix[0] = unit_frontier();
  for (int p = 0; p < n; ++p) {
    const auto& site = net.sites[p];
    prefix[p + 1] =
        site.traced ? step_control(prefix[p], site) : step_target_closed(prefix[p], site, id);
  }
  suffix[n] = unit_frontier();
  for (int p = n; p-- > 0;) {
    const auto& site = net.sites[p];
    suffix[p] = site.traced ? step_control_back(suffix[p + 1], site)
                            : step_target_closed_back(suffix[p + 1], site, id);
  }

  std::vector<cplx> values;
  values.reserve(net.n_targets);
  for (int p = 0; p < n; ++p) {
    const auto& site = net.sites[p];
    if (site.traced) continue;
    Tensor left = step_target_closed(prefix[p], site, op);
    Tensor closed = contract(left, suffix[p + 1], {{0, 0}, {1, 1}, {2, 2}, {3, 3}});
    values.push_back(closed.data[0]);
  }
  return values;
}

double network_total_occupation(const TwoLayerNetwork& net) {
  double total = 0;
  for (const cplx& v : network_site_expectations(net, Tensor::ketbra(1, 1))) total += v.real();
  return total;
}

std::vector<int> network_bond_profile(const TwoLayerNetwork& net) {
  // The output bond between targets j and j+1 threads control j+1: the ket
  // and bra bonds of its right gate times the row bond it carries.
  std::vector<int> profile;
  for (std::size_t p = 2; p + 1 < net.sites.size(); p += 2) {
    const auto& site = net.sites[p];
    const int gk = static_cast<int>(site.kernel.shape[4]);
    const int b = static_cast<int>(site.base.shape[3]);
    profile.push_back(gk * gk * b);
  }
  return profile;
}

int network_max_bond(const TwoLayerNetwork& net) {
  int max_bond = 1;
  for (int bond : network_bond_profile(net)) max_bond = std::max(max_bond, bond);
  return max_bond;
}

ZipResult network_zip_contract(const TwoLayerNetwork& net, std::size_t max_bond, double cutoff) {
  ZipResult res;
  Tensor f = unit_frontier();
  std::vector<Tensor> sites;
  sites.reserve(net.n_targets);
  for (const auto& site : net.sites) {
    if (site.traced) {
      f = step_control(f, site);
      continue;
    }
    Tensor a = contract(f, site.kernel, {{1, 0}, {3, 1}});  // (r, b, o, i, gk', gb')
    a = permute(a, {0, 2, 3, 4, 1, 5});                     // (r, o, i, gk', b, gb')
    const std::size_t r = a.shape[0];
    const std::size_t cols = a.shape[3] * a.shape[4] * a.shape[5];
    const std::vector<std::size_t> col_shape = {a.shape[3], a.shape[4], a.shape[5]};
    a = reshape(std::move(a), {r * 4, cols});
    SvdResult svd = svd_split(a, {0}, max_bond, cutoff);
    res.discarded += svd.discarded_weight;
    const std::size_t k = svd.singular_values.size();
    res.max_bond = std::max(res.max_bond, static_cast<int>(k));
    sites.push_back(reshape(svd.left, {r, 4, k}));
    Tensor carry = svd.right;  // (k, cols)
    for (std::size_t row = 0; row < k; ++row)
      for (std::size_t c = 0; c < cols; ++c) carry.data[row * cols + c] *= svd.singular_values[row];
    f = reshape(std::move(carry), {k, col_shape[0], col_shape[1], col_shape[2]});
  }
  // Fold the terminal frontier (all composite bonds trivial) into the last site.
  const std::size_t r_tail = f.shape[0];
  if (f.size() != r_tail) throw std::logic_error("network zip: right edge bonds not trivial");
  Tensor tail = reshape(std::move(f), {r_tail, 1});
  Tensor& last = sites.back();
  last = contract(last, tail, {{2, 0}});
  res.mps.sites = std::move(sites);
  res.mps.center = net.n_targets - 1;
  return res;
}

}  // namespace qca
