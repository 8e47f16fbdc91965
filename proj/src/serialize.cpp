#include "qca/serialize.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <stdexcept>

namespace qca {

static_assert(std::endian::native == std::endian::little,
              "container payloads are written as native little-endian doubles");

namespace {

constexpr char kMagic[8] = {'Q', 'C', 'A', 'T', 'N', '0', '0', '1'};
constexpr std::uint8_t kKindMps = 0;
constexpr std::uint8_t kKindMpo = 1;
constexpr std::uint8_t kKindRowState = 2;

void write_u32(std::ostream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

void write_u64(std::ostream& out, std::uint64_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

std::uint32_t read_u32(std::istream& in) {
  std::uint32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}

std::uint64_t read_u64(std::istream& in) {
  std::uint64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}

void write_sites(std::ostream& out, const std::vector<Tensor>& sites) {
  write_u32(out, static_cast<std::uint32_t>(sites.size()));
  for (const auto& t : sites) {
    const std::uint8_t rank = static_cast<std::uint8_t>(t.rank());
    out.write(reinterpret_cast<const char*>(&rank), 1);
    for (std::size_t e : t.shape) write_u64(out, e);
    out.write(reinterpret_cast<const char*>(t.data.data()),
              static_cast<std::streamsize>(t.data.size() * sizeof(cplx)));
  }
}

std::vector<Tensor> read_sites(std::istream& in) {
  const std::uint32_t n = read_u32(in);
  std::vector<Tensor> sites;
  sites.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    std::uint8_t rank = 0;
    in.read(reinterpret_cast<char*>(&rank), 1);
    std::vector<std::size_t> shape(rank);
    for (auto& e : shape) e = static_cast<std::size_t>(read_u64(in));
    Tensor t(shape);
    in.read(reinterpret_cast<char*>(t.data.data()),
            static_cast<std::streamsize>(t.data.size() * sizeof(cplx)));
    sites.push_back(std::move(t));
  }
  return sites;
}

void write_container(const std::string& path, std::uint8_t kind, const nlohmann::json& meta,
                     const std::vector<Tensor>& sites) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(kMagic, sizeof(kMagic));
  out.write(reinterpret_cast<const char*>(&kind), 1);
  const std::string meta_text = meta.dump();
  write_u32(out, static_cast<std::uint32_t>(meta_text.size()));
  out.write(meta_text.data(), static_cast<std::streamsize>(meta_text.size()));
  write_sites(out, sites);
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::pair<nlohmann::json, std::vector<Tensor>> read_container(const std::string& path,
                                                              std::uint8_t expected_kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::string(magic, 8) != std::string(kMagic, 8))
    throw std::runtime_error("not a tensor container: " + path);
  std::uint8_t kind = 0;
  in.read(reinterpret_cast<char*>(&kind), 1);
  if (kind != expected_kind) throw std::runtime_error("container kind mismatch: " + path);
  const std::uint32_t meta_len = read_u32(in);
  std::string meta_text(meta_len, '\0');
  in.read(meta_text.data(), meta_len);
  nlohmann::json meta =
      meta_text.empty() ? nlohmann::json::object() : nlohmann::json::parse(meta_text);
  auto sites = read_sites(in);
  if (!in) throw std::runtime_error("truncated container: " + path);
  return {std::move(meta), std::move(sites)};
}

}  // namespace

void save_mpo(const std::string& path, const Mpo& m, const nlohmann::json& meta) {
  write_container(path, kKindMpo, meta, m.sites);
}

std::pair<Mpo, nlohmann::json> load_mpo(const std::string& path) {
  auto [meta, sites] = read_container(path, kKindMpo);
  Mpo m;
  m.sites = std::move(sites);
  validate_mpo(m);
  return {std::move(m), std::move(meta)};
}

void save_mps(const std::string& path, const Mps& s, const nlohmann::json& meta) {
  write_container(path, kKindMps, meta, s.sites);
}

std::pair<Mps, nlohmann::json> load_mps(const std::string& path) {
  auto [meta, sites] = read_container(path, kKindMps);
  Mps s;
  s.sites = std::move(sites);
  validate_mps(s);
  return {std::move(s), std::move(meta)};
}

void save_row_state(const std::string& path, const RowState& s, const nlohmann::json& extra) {
  nlohmann::json meta = extra;
  meta["time"] = s.time;
  meta["left_offset"] = s.left_offset;
  write_container(path, kKindRowState, meta, s.rho.sites);
}

std::pair<RowState, nlohmann::json> load_row_state(const std::string& path) {
  auto [meta, sites] = read_container(path, kKindRowState);
  RowState s;
  s.rho.sites = std::move(sites);
  validate_mpo(s.rho);
  s.time = meta.at("time").get<int>();
  s.left_offset = meta.at("left_offset").get<int>();
  return {std::move(s), std::move(meta)};
}

}  // namespace qca
