#include "mvip/instance_io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"
#include "mvip/errors.hpp"

namespace mvip {
namespace {

using nlohmann::json;

constexpr char kMagic[8] = {'M', 'V', 'I', 'P', 'I', 'N', 'S', 'T'};

void put_u64(std::string& out, std::uint64_t x) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((x >> (8 * i)) & 0xFF));
}

std::uint64_t get_u64(const unsigned char* p) {
  std::uint64_t x = 0;
  for (int i = 0; i < 8; ++i) x |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return x;
}

class PayloadWriter {
 public:
  void add(const std::string& name, const Matrix& m) {
    std::vector<std::int64_t> shape{m.rows(), m.cols()};
    json entry = {{"name", name}, {"shape", shape}, {"order", "row-major"},
                  {"dtype", "float64-le"}, {"offset", bytes_.size()}};
    for (Index i = 0; i < m.rows(); ++i)
      for (Index j = 0; j < m.cols(); ++j) put_u64(bytes_, std::bit_cast<std::uint64_t>(m(i, j)));
    arrays_.push_back(std::move(entry));
  }

  void add(const std::string& name, const Vector& v) {
    json entry = {{"name", name}, {"shape", std::vector<std::int64_t>{v.size()}},
                  {"order", "row-major"}, {"dtype", "float64-le"}, {"offset", bytes_.size()}};
    for (Index i = 0; i < v.size(); ++i) put_u64(bytes_, std::bit_cast<std::uint64_t>(v[i]));
    arrays_.push_back(std::move(entry));
  }

  const json& arrays() const { return arrays_; }
  const std::string& bytes() const { return bytes_; }

 private:
  json arrays_ = json::array();
  std::string bytes_;
};

class PayloadReader {
 public:
  PayloadReader(const json& header, std::string payload)
      : header_(header), payload_(std::move(payload)) {}

  Matrix matrix(const std::string& name) const {
    const json& entry = find(name);
    const auto& shape = entry.at("shape");
    if (shape.size() != 2) throw Error(ErrorKind::Parse, "array '" + name + "' is not 2-D");
    const auto rows = shape[0].get<Index>();
    const auto cols = shape[1].get<Index>();
    const auto* p = span(entry, rows * cols);
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j)
        m(i, j) = std::bit_cast<double>(get_u64(p + 8 * (i * cols + j)));
    return m;
  }

  Vector vector(const std::string& name) const {
    const json& entry = find(name);
    const auto& shape = entry.at("shape");
    if (shape.size() != 1) throw Error(ErrorKind::Parse, "array '" + name + "' is not 1-D");
    const auto n = shape[0].get<Index>();
    const auto* p = span(entry, n);
    Vector v(n);
    for (Index i = 0; i < n; ++i) v[i] = std::bit_cast<double>(get_u64(p + 8 * i));
    return v;
  }

 private:
  const json& find(const std::string& name) const {
    for (const auto& entry : header_.at("arrays"))
      if (entry.at("name") == name) {
        if (entry.value("dtype", "") != "float64-le" || entry.value("order", "") != "row-major")
          throw Error(ErrorKind::Parse, "array '" + name + "' has an unsupported layout");
        return entry;
      }
    throw Error(ErrorKind::Parse, "missing array '" + name + "'");
  }

  const unsigned char* span(const json& entry, Index count) const {
    const auto offset = entry.at("offset").get<std::uint64_t>();
    const auto bytes = static_cast<std::uint64_t>(count) * 8;
    if (count < 0 || offset > payload_.size() || bytes > payload_.size() - offset)
      throw Error(ErrorKind::Parse, "array extends past end of file");
    return reinterpret_cast<const unsigned char*>(payload_.data()) + offset;
  }

  const json& header_;
  std::string payload_;
};

json snr_field(double snr_db) {
  if (std::isinf(snr_db)) return nullptr;
  return snr_db;
}

double snr_from(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

}  // namespace

void save_instance(const std::filesystem::path& path, const Instance& instance) {
  json header = {{"format", "mvip-instance"}, {"version", 1}};
  PayloadWriter payload;

  std::visit(
      [&](const auto& inst) {
        using T = std::decay_t<decltype(inst)>;
        if constexpr (std::is_same_v<T, CompressedSensingInstance>) {
          header["family"] = "cs";
          header["d"] = inst.sensing.cols();
          header["m"] = inst.sensing.rows();
          header["l"] = inst.sparsity;
          header["seed"] = inst.seed;
          header["rho"] = inst.rho;
          header["snr_db"] = snr_field(inst.snr_db);
          payload.add("sensing", inst.sensing);
          payload.add("truth", inst.truth);
          payload.add("noise", inst.noise);
          payload.add("observed", inst.observed);
        } else if constexpr (std::is_same_v<T, LpaInstance>) {
          header["family"] = "lpa";
          header["d"] = inst.design.cols();
          header["m"] = inst.design.rows();
          header["seed"] = inst.seed;
          header["mu"] = inst.mu;
          header["alpha"] = inst.alpha;
          header["rho"] = inst.rho;
          header["snr_db"] = snr_field(inst.snr_db);
          payload.add("design", inst.design);
          payload.add("response", inst.response);
          payload.add("truth", inst.truth);
        } else {
          header["family"] = "l2";
          header["nodes"] = inst.nodes;
          header["case"] = inst.case_id;
          payload.add("weights", inst.space.weights());
          payload.add("u0", inst.u0);
          payload.add("u1", inst.u1);
        }
      },
      instance);
  header["arrays"] = payload.arrays();

  const std::string text = header.dump();
  std::string blob(kMagic, sizeof(kMagic));
  put_u64(blob, text.size());
  blob += text;
  blob += payload.bytes();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
  out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
  if (!out) throw Error(ErrorKind::Io, "write failed for '" + path.string() + "'");
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");
  const std::string blob((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (blob.size() < 16 || std::memcmp(blob.data(), kMagic, sizeof(kMagic)) != 0)
    throw Error(ErrorKind::Parse, "'" + path.string() + "' is not an instance file");
  const std::uint64_t header_len = get_u64(reinterpret_cast<const unsigned char*>(blob.data()) + 8);
  if (header_len > blob.size() - 16) throw Error(ErrorKind::Parse, "truncated instance header");

  json header;
  try {
    header = json::parse(blob.substr(16, header_len));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("instance header: ") + e.what());
  }

  try {
    if (header.value("format", "") != "mvip-instance" || header.value("version", 0) != 1)
      throw Error(ErrorKind::Parse, "unsupported instance format or version");
    PayloadReader arrays(header, blob.substr(16 + header_len));
    const std::string family = header.at("family");
    if (family == "cs") {
      CompressedSensingInstance inst;
      inst.sensing = arrays.matrix("sensing");
      inst.truth = arrays.vector("truth");
      inst.noise = arrays.vector("noise");
      inst.observed = arrays.vector("observed");
      inst.sparsity = header.at("l");
      inst.seed = header.at("seed");
      inst.rho = header.at("rho");
      inst.snr_db = snr_from(header.at("snr_db"));
      return inst;
    }
    if (family == "lpa") {
      LpaInstance inst;
      inst.design = arrays.matrix("design");
      inst.response = arrays.vector("response");
      inst.truth = arrays.vector("truth");
      inst.seed = header.at("seed");
      inst.mu = header.at("mu");
      inst.alpha = header.at("alpha");
      inst.rho = header.at("rho");
      inst.snr_db = snr_from(header.at("snr_db"));
      return inst;
    }
    if (family == "l2") {
      L2Instance inst;
      inst.nodes = header.at("nodes");
      inst.case_id = header.at("case");
      inst.space = InnerProductSpace(arrays.vector("weights"));
      inst.u0 = arrays.vector("u0");
      inst.u1 = arrays.vector("u1");
      return inst;
    }
    throw Error(ErrorKind::Parse, "unknown instance family '" + family + "'");
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("instance header: ") + e.what());
  }
}

}  // namespace mvip
