#include "qca/mps_mpo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qca {

namespace {

void check(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

int Mpo::max_bond() const {
  int m = 1;
  for (const auto& s : sites) m = std::max(m, static_cast<int>(s.shape[3]));
  return m;
}

int Mps::max_bond() const {
  int m = 1;
  for (const auto& s : sites) m = std::max(m, static_cast<int>(s.shape[2]));
  return m;
}

void validate_mpo(const Mpo& m) {
  check(!m.sites.empty(), "mpo: empty");
  std::size_t bond = 1;
  for (const auto& s : m.sites) {
    check(s.rank() == 4, "mpo: sites must have 4 axes");
    check(s.shape[1] == 2 && s.shape[2] == 2, "mpo: physical extents must be 2");
    check(s.shape[0] == bond, "mpo: adjacent bond extents must match");
    bond = s.shape[3];
  }
  check(bond == 1, "mpo: boundary bonds must have extent 1");
}

void validate_mps(const Mps& s) {
  check(!s.sites.empty(), "mps: empty");
  std::size_t bond = 1;
  for (const auto& t : s.sites) {
    check(t.rank() == 3, "mps: sites must have 3 axes");
    check(t.shape[0] == bond, "mps: adjacent bond extents must match");
    bond = t.shape[2];
  }
  check(bond == 1, "mps: boundary bonds must have extent 1");
}

cplx mpo_trace(const Mpo& m) {
  Tensor v({1});
  v.data[0] = 1.0;
  for (const auto& site : m.sites) {
    Tensor transfer({site.shape[0], site.shape[3]});
    for (std::size_t bl = 0; bl < site.shape[0]; ++bl)
      for (std::size_t br = 0; br < site.shape[3]; ++br) {
        cplx acc = 0;
        for (std::size_t o = 0; o < 2; ++o)
          acc += site.data[((bl * 2 + o) * 2 + o) * site.shape[3] + br];
        transfer.data[bl * site.shape[3] + br] = acc;
      }
    v = contract(v, transfer, {{0, 0}});
  }
  return v.data[0];
}

cplx mpo_local_expectation(const Mpo& m, int site, const Tensor& op) {
  if (site < 0 || site >= m.length())
    throw std::invalid_argument("mpo_local_expectation: site out of range");
  if (op.rank() != 2 || op.shape[0] != 2 || op.shape[1] != 2)
    throw std::invalid_argument("mpo_local_expectation: op must be 2x2");
  Tensor v({1});
  v.data[0] = 1.0;
  for (int i = 0; i < m.length(); ++i) {
    const Tensor& w = m.sites[i];
    Tensor transfer;
    if (i == site) {
      // Tr(op rho): sum over out,in of W[.,o,i,.] op[i,o].
      transfer = contract(w, op, {{1, 1}, {2, 0}});
    } else {
      transfer = contract(w, Tensor::identity(2), {{1, 1}, {2, 0}});
    }
    v = contract(v, transfer, {{0, 0}});
  }
  return v.data[0];
}

Mps mpo_to_doubled_mps(const Mpo& m) {
  validate_mpo(m);
  Mps out;
  out.sites.reserve(m.sites.size());
  for (const auto& s : m.sites)
    out.sites.push_back(reshape(s, {s.shape[0], 4, s.shape[3]}));
  return out;
}

Mpo mps_to_mpo(const Mps& s) {
  validate_mps(s);
  Mpo out;
  out.sites.reserve(s.sites.size());
  for (const auto& t : s.sites) {
    if (t.shape[1] != 4)
      throw std::invalid_argument("mps_to_mpo: physical dimension must be 4");
    out.sites.push_back(reshape(t, {t.shape[0], 2, 2, t.shape[2]}));
  }
  return out;
}

Mpo mpo_dagger(const Mpo& m) {
  Mpo out;
  out.sites.reserve(m.sites.size());
  for (const auto& s : m.sites) out.sites.push_back(conj(permute(s, {0, 2, 1, 3})));
  return out;
}

Mps doubled_dagger(const Mps& s) {
  return mpo_to_doubled_mps(mpo_dagger(mps_to_mpo(s)));
}

cplx mps_overlap(const Mps& a, const Mps& b) {
  if (a.length() != b.length()) throw std::invalid_argument("mps_overlap: length mismatch");
  Tensor env({1, 1});
  env.data[0] = 1.0;
  for (int i = 0; i < a.length(); ++i) {
    const Tensor& sa = a.sites[i];
    const Tensor& sb = b.sites[i];
    if (sa.shape[1] != sb.shape[1])
      throw std::invalid_argument("mps_overlap: physical dimension mismatch");
    // env[a_l, b_l] -> env'[a_r, b_r]
    Tensor tmp = contract(env, conj(sa), {{0, 0}});     // (b_l, d, a_r)
    env = contract(tmp, sb, {{0, 0}, {1, 1}});          // (a_r, b_r)
  }
  return env.data[0];
}

double mps_norm(const Mps& s) {
  return std::sqrt(std::max(0.0, mps_overlap(s, s).real()));
}

double mps_distance(const Mps& a, const Mps& b) {
  Mps diff = mps_add(a, mps_scale(b, cplx(-1)));
  const int last = diff.length() - 1;
  diff = canonicalized(std::move(diff), last);
  return diff.sites.back().norm();
}

namespace {

Tensor doubled_site_transfer(const Tensor& site, const Tensor& op) {
  // sum_d conj(vec(op)[d]) site[., d, .] with vec(op)[2o+i] = op[o,i].
  Tensor w({4});
  for (int d = 0; d < 4; ++d) w.data[d] = std::conj(op.data[d]);
  return contract(w, site, {{0, 1}});  // (bl, br)
}

}  // namespace

cplx doubled_trace(const Mps& rho) {
  Tensor v({1});
  v.data[0] = 1.0;
  const Tensor id = Tensor::identity(2);
  for (const auto& site : rho.sites) v = contract(v, doubled_site_transfer(site, id), {{0, 0}});
  return v.data[0];
}

cplx doubled_local_expectation(const Mps& rho, int site, const Tensor& op) {
  if (site < 0 || site >= rho.length())
    throw std::invalid_argument("doubled_local_expectation: site out of range");
  Tensor v({1});
  v.data[0] = 1.0;
  const Tensor id = Tensor::identity(2);
  for (int i = 0; i < rho.length(); ++i)
    v = contract(v, doubled_site_transfer(rho.sites[i], i == site ? op : id), {{0, 0}});
  return v.data[0];
}

cplx doubled_total_occupation(const Mps& rho) {
  const int n = rho.length();
  const Tensor id = Tensor::identity(2);
  const Tensor num = Tensor::ketbra(1, 1);

  std::vector<Tensor> id_transfer(n), num_transfer(n);
  for (int i = 0; i < n; ++i) {
    id_transfer[i] = doubled_site_transfer(rho.sites[i], id);
    num_transfer[i] = doubled_site_transfer(rho.sites[i], num);
  }
  // prefix[i]: identity closure over sites < i; suffix[i]: over sites > i.
  std::vector<Tensor> prefix(n + 1), suffix(n + 1);
  prefix[0] = Tensor({1});
  prefix[0].data[0] = 1.0;
  for (int i = 0; i < n; ++i) prefix[i + 1] = contract(prefix[i], id_transfer[i], {{0, 0}});
  suffix[n] = Tensor({1});
  suffix[n].data[0] = 1.0;
  for (int i = n; i-- > 0;) suffix[i] = contract(id_transfer[i], suffix[i + 1], {{1, 0}});

  cplx total = 0;
  for (int i = 0; i < n; ++i) {
    Tensor left = contract(prefix[i], num_transfer[i], {{0, 0}});
    total += contract(left, suffix[i + 1], {{0, 0}}).data[0];
  }
  return total;
}

Mps canonicalized(Mps s, int center) {
  validate_mps(s);
  if (center < 0 || center >= s.length())
    throw std::invalid_argument("canonicalized: center out of range");
  for (int i = 0; i < center; ++i) {
    Tensor& t = s.sites[i];
    const auto [bl, d, br] = std::tuple(t.shape[0], t.shape[1], t.shape[2]);
    auto [q, r] = qr(reshape(t, {bl * d, br}));
    const std::size_t k = q.shape[1];
    t = reshape(std::move(q), {bl, d, k});
    s.sites[i + 1] = contract(r, s.sites[i + 1], {{1, 0}});
  }
  for (int i = s.length() - 1; i > center; --i) {
    Tensor& t = s.sites[i];
    const auto [bl, d, br] = std::tuple(t.shape[0], t.shape[1], t.shape[2]);
    auto [l, q] = lq(reshape(t, {bl, d * br}));
    const std::size_t k = q.shape[0];
    t = reshape(std::move(q), {k, d, br});
    s.sites[i - 1] = contract(s.sites[i - 1], l, {{2, 0}});
  }
  s.center = center;
  return s;
}

std::pair<Mps, double> mps_svd_truncate(const Mps& s, const CompressionPolicy& policy) {
  Mps out = canonicalized(s, s.length() - 1);
  double discarded = 0.0;
  for (int i = out.length() - 1; i > 0; --i) {
    Tensor& t = out.sites[i];
    const auto [bl, d, br] = std::tuple(t.shape[0], t.shape[1], t.shape[2]);
    SvdResult r = svd_split(reshape(t, {bl, d, br}), {0}, policy.chi_limit(), policy.svd_cutoff);
    discarded += r.discarded_weight;
    const std::size_t k = r.singular_values.size();
    t = reshape(std::move(r.right), {k, d, br});
    Tensor carry = r.left;  // (bl, k)
    for (std::size_t row = 0; row < bl; ++row)
      for (std::size_t col = 0; col < k; ++col)
        carry.data[row * k + col] *= r.singular_values[col];
    out.sites[i - 1] = contract(out.sites[i - 1], carry, {{2, 0}});
  }
  out.center = 0;
  return {std::move(out), discarded};
}

Mps mps_add(const Mps& a, const Mps& b) {
  if (a.length() != b.length()) throw std::invalid_argument("mps_add: length mismatch");
  const int n = a.length();
  if (n == 1) {
    Mps out = a;
    out.sites[0] += b.sites[0];
    out.center.reset();
    return out;
  }
  Mps out;
  out.sites.reserve(n);
  for (int i = 0; i < n; ++i) {
    const Tensor& ta = a.sites[i];
    const Tensor& tb = b.sites[i];
    if (ta.shape[1] != tb.shape[1]) throw std::invalid_argument("mps_add: physical mismatch");
    const std::size_t d = ta.shape[1];
    const std::size_t bl = (i == 0) ? 1 : ta.shape[0] + tb.shape[0];
    const std::size_t br = (i == n - 1) ? 1 : ta.shape[2] + tb.shape[2];
    Tensor t({bl, d, br});
    auto put = [&](const Tensor& src, std::size_t row_off, std::size_t col_off) {
      for (std::size_t r = 0; r < src.shape[0]; ++r)
        for (std::size_t p = 0; p < d; ++p)
          for (std::size_t c = 0; c < src.shape[2]; ++c)
            t.data[((r + row_off) * d + p) * br + (c + col_off)] =
                src.data[(r * d + p) * src.shape[2] + c];
    };
    put(ta, 0, 0);
    put(tb, (i == 0) ? 0 : ta.shape[0], (i == n - 1) ? 0 : ta.shape[2]);
    out.sites.push_back(std::move(t));
  }
  return out;
}

Mps mps_scale(Mps s, cplx factor) {
  s.sites[0] *= factor;
  return s;
}

Mpo mpo_scale(Mpo m, cplx factor) {
  m.sites[0] *= factor;
  return m;
}

Mpo product_mpo(int n_sites, const Tensor& site_op) {
  if (n_sites < 1) throw std::invalid_argument("product_mpo: need at least one site");
  Mpo out;
  out.sites.assign(n_sites, reshape(site_op, {1, 2, 2, 1}));
  return out;
}

}  // namespace qca
