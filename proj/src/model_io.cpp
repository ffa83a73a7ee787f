#include "crbm/model_io.hpp"

#include <cstring>
#include <fstream>

#include "json.hpp"

namespace crbm::io {

namespace {

constexpr char kMagic[8] = {'C', 'R', 'B', 'M', 'M', 'D', 'L', '\0'};
constexpr uint32_t kVersion = 1;

uint64_t fnv1a(const uint8_t* data, size_t n, uint64_t h = 1469598103934665603ULL) {
  for (size_t i = 0; i < n; ++i) {
    h ^= data[i];
    h *= 1099511628211ULL;
  }
  return h;
}

template <typename T>
void write_pod(std::ofstream& out, const T& v, uint64_t* hash) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
  *hash = fnv1a(reinterpret_cast<const uint8_t*>(&v), sizeof(T), *hash);
}

void write_array(std::ofstream& out, const double* data, size_t n, uint64_t* hash) {
  out.write(reinterpret_cast<const char*>(data), n * sizeof(double));
  *hash = fnv1a(reinterpret_cast<const uint8_t*>(data), n * sizeof(double), *hash);
}

template <typename T>
void read_pod(std::ifstream& in, T* v, uint64_t* hash) {
  in.read(reinterpret_cast<char*>(v), sizeof(T));
  if (!in) throw RunError("model file truncated");
  *hash = fnv1a(reinterpret_cast<const uint8_t*>(v), sizeof(T), *hash);
}

void read_array(std::ifstream& in, double* data, size_t n, uint64_t* hash) {
  in.read(reinterpret_cast<char*>(data), n * sizeof(double));
  if (!in) throw RunError("model file truncated");
  *hash = fnv1a(reinterpret_cast<const uint8_t*>(data), n * sizeof(double), *hash);
}

}  // namespace

void save_model(const std::string& path, const CrbmParams& params,
                const cohort::CohortSchema& schema,
                const std::string& provenance_json) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RunError("cannot write " + path);
  uint64_t hash = 1469598103934665603ULL;
  out.write(kMagic, sizeof(kMagic));
  hash = fnv1a(reinterpret_cast<const uint8_t*>(kMagic), sizeof(kMagic), hash);
  write_pod(out, kVersion, &hash);
  const uint64_t schema_hash = schema.hash();
  write_pod(out, schema_hash, &hash);
  const uint32_t hidden_kind = params.hidden_kind == UnitKind::relu_hidden ? 0u : 1u;
  write_pod(out, hidden_kind, &hash);
  write_pod(out, static_cast<uint32_t>(params.layout.lag()), &hash);
  write_pod(out, static_cast<uint32_t>(params.n_hidden), &hash);
  write_pod(out, static_cast<uint32_t>(params.n_visible()), &hash);
  write_array(out, params.t.weights.data(), params.t.weights.size(), &hash);
  write_array(out, params.t.vis_field.data(), params.t.vis_field.size(), &hash);
  write_array(out, params.t.vis_log_sigma.data(), params.t.vis_log_sigma.size(),
              &hash);
  write_array(out, params.t.hid_theta.data(), params.t.hid_theta.size(), &hash);
  write_array(out, params.t.hid_log_eps.data(), params.t.hid_log_eps.size(), &hash);
  out.write(reinterpret_cast<const char*>(&hash), sizeof(hash));
  if (!out) throw RunError("failed writing " + path);
  out.close();

  nlohmann::json meta;
  meta["format_version"] = kVersion;
  meta["schema_hash"] = schema_hash;
  meta["hidden_kind"] = hidden_kind == 0 ? "relu" : "bernoulli";
  meta["lag"] = params.layout.lag();
  meta["n_hidden"] = params.n_hidden;
  meta["n_visible"] = params.n_visible();
  try {
    meta["provenance"] = nlohmann::json::parse(provenance_json);
  } catch (...) {
    meta["provenance"] = provenance_json;
  }
  std::ofstream sidecar(path + ".meta.json");
  sidecar << meta.dump(2) << '\n';
}

CrbmParams load_model(const std::string& path, const cohort::CohortSchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RunError("cannot open model file " + path);
  uint64_t hash = 1469598103934665603ULL;
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw RunError(path + ": not a model file (bad magic)");
  }
  hash = fnv1a(reinterpret_cast<const uint8_t*>(magic), sizeof(magic), hash);
  uint32_t version = 0;
  read_pod(in, &version, &hash);
  if (version != kVersion) {
    throw RunError(path + ": unsupported model format version " +
                   std::to_string(version));
  }
  uint64_t schema_hash = 0;
  read_pod(in, &schema_hash, &hash);
  if (schema_hash != schema.hash()) {
    throw DataError(path + ": schema hash mismatch (model was built for a "
                           "different cohort schema)");
  }
  uint32_t hidden_kind = 0, lag = 0, n_hidden = 0, n_visible = 0;
  read_pod(in, &hidden_kind, &hash);
  read_pod(in, &lag, &hash);
  read_pod(in, &n_hidden, &hash);
  read_pod(in, &n_visible, &hash);
  if (hidden_kind > 1 || lag == 0 || lag > 16 || n_hidden == 0 ||
      n_hidden > 1000000 || n_visible == 0 || n_visible > 1000000) {
    throw RunError(path + ": corrupt header");
  }

  CrbmParams params;
  params.layout = BlockLayout(schema, static_cast<int>(lag));
  params.hidden_kind = hidden_kind == 0 ? UnitKind::relu_hidden : UnitKind::bernoulli;
  params.n_hidden = static_cast<int>(n_hidden);
  if (params.layout.n_visible() != static_cast<int>(n_visible)) {
    throw DataError(path + ": visible layout mismatch with schema");
  }
  params.t.resize(n_visible, n_hidden);
  read_array(in, params.t.weights.data(), params.t.weights.size(), &hash);
  read_array(in, params.t.vis_field.data(), params.t.vis_field.size(), &hash);
  read_array(in, params.t.vis_log_sigma.data(), params.t.vis_log_sigma.size(), &hash);
  read_array(in, params.t.hid_theta.data(), params.t.hid_theta.size(), &hash);
  read_array(in, params.t.hid_log_eps.data(), params.t.hid_log_eps.size(), &hash);
  uint64_t stored = 0;
  in.read(reinterpret_cast<char*>(&stored), sizeof(stored));
  if (!in || stored != hash) throw RunError(path + ": checksum mismatch");
  if (!params.t.all_finite()) throw RunError(path + ": non-finite parameters");
  params.refresh_scales();
  return params;
}

}  // namespace crbm::io
