#include "ugnn/train/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <limits>
#include <vector>

#include "ugnn/common/error.hpp"

static_assert(std::endian::native == std::endian::little,
              "checkpoint format assumes a little-endian host");

namespace ugnn::train {

namespace {

constexpr char kMagic[4] = {'U', 'G', 'N', 'N'};
constexpr std::uint32_t kVersion = 1;

struct Record {
  std::string name;
  std::vector<std::uint64_t> dims;
  std::vector<double> payload;
};

void write_u32(std::ofstream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
void write_u64(std::ofstream& out, std::uint64_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

void write_record(std::ofstream& out, const Record& r) {
  write_u32(out, static_cast<std::uint32_t>(r.name.size()));
  out.write(r.name.data(), static_cast<std::streamsize>(r.name.size()));
  write_u32(out, static_cast<std::uint32_t>(r.dims.size()));
  std::uint64_t total = 1;
  for (auto d : r.dims) {
    write_u64(out, d);
    total *= d;
  }
  if (total != r.payload.size()) throw ContractViolation("checkpoint: dims/payload mismatch");
  out.write(reinterpret_cast<const char*>(r.payload.data()),
            static_cast<std::streamsize>(r.payload.size() * sizeof(double)));
}

Record mat_record(const std::string& name, const Mat& m) {
  Record r;
  r.name = name;
  r.dims = {static_cast<std::uint64_t>(m.rows), static_cast<std::uint64_t>(m.cols)};
  r.payload = m.d;
  return r;
}

Record scalar_record(const std::string& name, double v) {
  Record r;
  r.name = name;
  r.dims = {1};
  r.payload = {v};
  return r;
}

Record text_record(const std::string& name, const std::string& text) {
  Record r;
  r.name = name;
  r.dims = {static_cast<std::uint64_t>(text.size())};
  r.payload.reserve(text.size());
  for (unsigned char c : text) r.payload.push_back(static_cast<double>(c));
  return r;
}

Mat record_to_mat(const Record& r) {
  if (r.dims.size() != 2) throw DataError("checkpoint: expected 2-d record " + r.name);
  Mat m(static_cast<int>(r.dims[0]), static_cast<int>(r.dims[1]));
  m.d = r.payload;
  return m;
}

std::string record_to_text(const Record& r) {
  std::string s;
  s.reserve(r.payload.size());
  for (double v : r.payload) s.push_back(static_cast<char>(static_cast<unsigned char>(v)));
  return s;
}

}  // namespace

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write checkpoint: " + path);
  out.write(kMagic, 4);
  write_u32(out, ckpt.version);

  std::vector<Record> records;
  for (const auto& [name, t] : ckpt.params) {
    records.push_back(mat_record("param/" + name, t.value));
  }
  for (const auto& [name, m] : ckpt.opt_state.m) records.push_back(mat_record("adam_m/" + name, m));
  for (const auto& [name, v] : ckpt.opt_state.v) records.push_back(mat_record("adam_v/" + name, v));
  for (const auto& [name, m] : ckpt.extra) records.push_back(mat_record("extra/" + name, m));
  records.push_back(scalar_record("meta/epoch", ckpt.epoch));
  records.push_back(scalar_record("meta/opt_step", ckpt.opt_state.step));
  records.push_back(scalar_record("meta/best_val", ckpt.best_val));
  records.push_back(scalar_record("meta/best_epoch", ckpt.best_epoch));
  records.push_back(text_record("text/config", ckpt.config_text));
  records.push_back(text_record("text/rng_state", ckpt.rng_state));

  write_u64(out, records.size());
  for (const auto& r : records) write_record(out, r);
  if (!out) throw DataError("checkpoint write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint: " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw DataError("not a checkpoint file (bad magic): " + path);
  }
  std::uint32_t version = 0;
  in.read(reinterpret_cast<char*>(&version), sizeof(version));
  if (version != kVersion) {
    throw DataError("unsupported checkpoint version " + std::to_string(version));
  }
  std::uint64_t count = 0;
  in.read(reinterpret_cast<char*>(&count), sizeof(count));

  Checkpoint ckpt;
  ckpt.version = version;
  for (std::uint64_t i = 0; i < count; ++i) {
    std::uint32_t name_len = 0;
    in.read(reinterpret_cast<char*>(&name_len), sizeof(name_len));
    Record r;
    r.name.resize(name_len);
    in.read(r.name.data(), name_len);
    std::uint32_t ndims = 0;
    in.read(reinterpret_cast<char*>(&ndims), sizeof(ndims));
    std::uint64_t total = 1;
    r.dims.resize(ndims);
    for (auto& d : r.dims) {
      in.read(reinterpret_cast<char*>(&d), sizeof(d));
      total *= d;
    }
    r.payload.resize(total);
    in.read(reinterpret_cast<char*>(r.payload.data()),
            static_cast<std::streamsize>(total * sizeof(double)));
    if (!in) throw DataError("truncated checkpoint: " + path);

    const auto slash = r.name.find('/');
    const std::string kind = r.name.substr(0, slash);
    const std::string rest = slash == std::string::npos ? "" : r.name.substr(slash + 1);
    if (kind == "param") {
      ckpt.params.insert(rest, record_to_mat(r));
    } else if (kind == "adam_m") {
      ckpt.opt_state.m[rest] = record_to_mat(r);
    } else if (kind == "adam_v") {
      ckpt.opt_state.v[rest] = record_to_mat(r);
    } else if (kind == "extra") {
      ckpt.extra[rest] = record_to_mat(r);
    } else if (r.name == "meta/epoch") {
      ckpt.epoch = static_cast<int>(r.payload.at(0));
    } else if (r.name == "meta/opt_step") {
      ckpt.opt_state.step = static_cast<int>(r.payload.at(0));
    } else if (r.name == "meta/best_val") {
      ckpt.best_val = r.payload.at(0);
    } else if (r.name == "meta/best_epoch") {
      ckpt.best_epoch = static_cast<int>(r.payload.at(0));
    } else if (r.name == "text/config") {
      ckpt.config_text = record_to_text(r);
    } else if (r.name == "text/rng_state") {
      ckpt.rng_state = record_to_text(r);
    } else {
      throw DataError("checkpoint has unknown record " + r.name);
    }
  }
  return ckpt;
}

}  // namespace ugnn::train
