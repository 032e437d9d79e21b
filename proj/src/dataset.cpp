#include "fieldgen/dataset.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <system_error>

#include "fieldgen/errors.hpp"

namespace fieldgen {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::string_view kTagPrefix = R"(,"line_hash":")";
constexpr std::size_t kTagHexDigits = 16;

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[kTagHexDigits + 1];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string to_hex(const unsigned char* data, unsigned len) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned i = 0; i < len; ++i) {
    out.push_back(digits[data[i] >> 4]);
    out.push_back(digits[data[i] & 0xF]);
  }
  return out;
}

void append_double(std::string& out, double v) {
  if (!std::isfinite(v)) throw DatasetError("cannot serialize a non-finite value");
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  const std::string_view s(buf, static_cast<std::size_t>(res.ptr - buf));
  out.append(s);
  // Keep a fraction or exponent so JSON readers treat it as floating point (preserves -0.0).
  if (s.find_first_of(".e") == std::string_view::npos) out.append(".0");
}

template <typename T>
void append_uint(std::string& out, T v) {
  char buf[24];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

template <std::size_t N>
void append_array(std::string& out, const std::array<double, N>& a) {
  out.push_back('[');
  for (std::size_t i = 0; i < N; ++i) {
    if (i) out.push_back(',');
    append_double(out, a[i]);
  }
  out.push_back(']');
}

Provenance provenance_from_config(const json& config) {
  Provenance p;
  try {
    if (config.contains("curve_type")) p.curve = parse_curve_type(config.at("curve_type").get<std::string>());
    if (config.contains("diversity_level")) {
      p.level = parse_diversity_level(config.at("diversity_level").get<std::string>());
    }
    if (config.contains("beta_m")) p.beta = config.at("beta_m").get<double>();
  } catch (const std::exception& e) {
    throw SchemaError(std::string("manifest config: ") + e.what());
  }
  return p;
}

template <std::size_t N>
std::array<double, N> number_array(const json& j, const char* key, std::size_t line_no) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_array() || it->size() != N) {
    throw SchemaError(std::string("record field '") + key + "' must be an array of " + std::to_string(N) + " numbers",
                      line_no);
  }
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) {
    const auto& v = (*it)[i];
    if (!v.is_number()) throw SchemaError(std::string("record field '") + key + "' holds a non-number", line_no);
    out[i] = v.get<double>();
  }
  return out;
}

std::uint64_t unsigned_field(const json& j, const char* key, std::size_t line_no) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_number_unsigned()) {
    throw SchemaError(std::string("record field '") + key + "' must be a non-negative integer", line_no);
  }
  return it->get<std::uint64_t>();
}

}  // namespace

struct DatasetWriter::HashState {
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  HashState() {
    if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) throw DatasetError("sha256 init failed");
  }
  ~HashState() { EVP_MD_CTX_free(ctx); }
  void update(std::string_view s) { EVP_DigestUpdate(ctx, s.data(), s.size()); }
  std::string hex() {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned len = 0;
    EVP_DigestFinal_ex(ctx, md, &len);
    return to_hex(md, len);
  }
};

std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw DatasetError("sha256 failed");
  }
  return to_hex(md, len);
}

std::string sha256_file(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw DatasetError("cannot open " + file.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  return to_hex(md, len);
}

std::string format_double(double v) {
  std::string s;
  append_double(s, v);
  return s;
}

json to_json(const DatasetManifest& m) {
  return {{"format", kFormatName},
          {"format_version", m.format_version},
          {"records_file", kRecordsFile},
          {"master_seed", m.master_seed},
          {"episode_count", m.episode_count},
          {"record_count", m.record_count},
          {"checksum", {{"algorithm", "sha256"}, {"value", m.checksum}}},
          {"config", m.config},
          {"config_text", m.config_text}};
}

DatasetManifest manifest_from_json(const json& j) {
  DatasetManifest m;
  try {
    if (j.at("format").get<std::string>() != kFormatName) throw SchemaError("manifest names an unknown format");
    m.format_version = j.at("format_version").get<int>();
    m.master_seed = j.at("master_seed").get<std::uint64_t>();
    m.episode_count = j.at("episode_count").get<std::uint64_t>();
    m.record_count = j.at("record_count").get<std::uint64_t>();
    if (j.at("checksum").at("algorithm").get<std::string>() != "sha256") {
      throw SchemaError("manifest checksum algorithm must be sha256");
    }
    m.checksum = j.at("checksum").at("value").get<std::string>();
    m.config = j.at("config");
    m.config_text = j.at("config_text").get<std::string>();
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed manifest: ") + e.what());
  }
  return m;
}

SerializedRecord to_serialized(const EpisodeRecord& rec) {
  SerializedRecord s;
  s.episode = rec.observation.episode;
  s.step = rec.observation.step;
  s.seed = rec.provenance.seed;
  const Pose& pose = rec.observation.pose;
  const Vec3 w = rotation_log(pose.orientation).vec();
  s.pose = {pose.position.x(), pose.position.y(), pose.position.z(), w.x(), w.y(), w.z()};
  s.gripper = static_cast<std::uint8_t>(rec.observation.gripper);
  for (std::size_t i = 0; i < kChunkSize; ++i) {
    const DeltaAction& a = rec.chunk[i];
    double* row = s.actions.data() + i * kActionWidth;
    for (int k = 0; k < 3; ++k) {
      row[k] = a.position[k];
      row[3 + k] = a.rotation[k];
    }
    row[6] = a.gripper == Gripper::close ? 1.0 : 0.0;
  }
  s.reward = rec.reward;
  s.image_path = rec.image_path;
  return s;
}

EpisodeRecord to_episode_record(const SerializedRecord& s, const Provenance& defaults) {
  EpisodeRecord rec;
  rec.observation.episode = s.episode;
  rec.observation.step = s.step;
  rec.observation.pose.position = Vec3(s.pose[0], s.pose[1], s.pose[2]);
  rec.observation.pose.orientation = rotation_exp(AxisAngle(Vec3(s.pose[3], s.pose[4], s.pose[5])));
  rec.observation.gripper = s.gripper ? Gripper::close : Gripper::open;
  for (std::size_t i = 0; i < kChunkSize; ++i) {
    const double* row = s.actions.data() + i * kActionWidth;
    rec.chunk[i] = {Vec3(row[0], row[1], row[2]), Vec3(row[3], row[4], row[5]),
                    row[6] != 0.0 ? Gripper::close : Gripper::open};
  }
  rec.reward = s.reward;
  rec.image_path = s.image_path;
  rec.provenance = defaults;
  rec.provenance.seed = s.seed;
  return rec;
}

std::string encode_record(const SerializedRecord& r) {
  std::string out;
  out.reserve(kActionBlock * 22 + 256);
  out.append(R"({"episode":)");
  append_uint(out, r.episode);
  out.append(R"(,"step":)");
  append_uint(out, r.step);
  out.append(R"(,"seed":)");
  append_uint(out, r.seed);
  out.append(R"(,"pose":)");
  append_array(out, r.pose);
  out.append(R"(,"gripper":)");
  append_uint(out, static_cast<unsigned>(r.gripper));
  out.append(R"(,"actions":)");
  append_array(out, r.actions);
  if (r.reward) {
    out.append(R"(,"reward":)");
    append_double(out, *r.reward);
  }
  if (r.image_path) {
    out.append(R"(,"image":)");
    out.append(json(*r.image_path).dump());
  }
  const std::uint64_t tag = fnv1a(out);
  out.append(kTagPrefix);
  out.append(hex64(tag));
  out.append("\"}");
  return out;
}

SerializedRecord decode_record(std::string_view line, std::size_t line_no) {
  const std::size_t pos = line.rfind(kTagPrefix);
  const bool tag_ok = pos != std::string_view::npos &&
                      line.size() == pos + kTagPrefix.size() + kTagHexDigits + 2 &&
                      line.substr(line.size() - 2) == "\"}";
  if (!tag_ok) throw ChecksumError("record line " + std::to_string(line_no) + ": integrity tag missing or damaged", line_no);
  const std::string_view body = line.substr(0, pos);
  if (hex64(fnv1a(body)) != line.substr(pos + kTagPrefix.size(), kTagHexDigits)) {
    throw ChecksumError("record line " + std::to_string(line_no) + ": content does not match its integrity tag",
                        line_no);
  }

  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw SchemaError("record line " + std::to_string(line_no) + ": " + e.what(), line_no);
  }
  if (!j.is_object()) throw SchemaError("record line " + std::to_string(line_no) + " is not an object", line_no);
  static const std::set<std::string> known{"episode", "step", "seed", "pose", "gripper",
                                           "actions", "reward", "image", "line_hash"};
  for (const auto& item : j.items()) {
    if (!known.contains(item.key())) {
      throw SchemaError("record line " + std::to_string(line_no) + ": unknown field '" + item.key() + "'", line_no);
    }
  }

  SerializedRecord r;
  r.episode = unsigned_field(j, "episode", line_no);
  r.step = unsigned_field(j, "step", line_no);
  r.seed = unsigned_field(j, "seed", line_no);
  const std::uint64_t g = unsigned_field(j, "gripper", line_no);
  if (g > 1) throw SchemaError("record field 'gripper' must be 0 or 1", line_no);
  r.gripper = static_cast<std::uint8_t>(g);
  r.pose = number_array<6>(j, "pose", line_no);
  r.actions = number_array<kActionBlock>(j, "actions", line_no);
  if (const auto it = j.find("reward"); it != j.end()) {
    if (!it->is_number()) throw SchemaError("record field 'reward' must be a number", line_no);
    r.reward = it->get<double>();
  }
  if (const auto it = j.find("image"); it != j.end()) {
    if (!it->is_string()) throw SchemaError("record field 'image' must be a string", line_no);
    r.image_path = it->get<std::string>();
  }
  return r;
}

DatasetWriter::DatasetWriter(fs::path dir, DatasetManifest header)
    : dir_(std::move(dir)), manifest_(std::move(header)), hash_(std::make_unique<HashState>()), buffer_(1 << 20) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw DatasetError("cannot create dataset directory " + dir_.string() + ": " + ec.message());
  tmp_records_ = dir_ / (std::string(kRecordsFile) + ".tmp");
  out_.rdbuf()->pubsetbuf(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
  out_.open(tmp_records_, std::ios::binary | std::ios::trunc);
  if (!out_) throw DatasetError("cannot open " + tmp_records_.string() + " for writing");
}

DatasetWriter::~DatasetWriter() {
  if (!finalized_) fail_cleanup();
}

void DatasetWriter::fail_cleanup() noexcept {
  out_.close();
  std::error_code ec;
  fs::remove(tmp_records_, ec);
  fs::remove(dir_ / (std::string(kManifestFile) + ".tmp"), ec);
}

void DatasetWriter::write(const SerializedRecord& rec) {
  if (finalized_) throw DatasetError("write after finalize");
  const std::pair key{rec.episode, rec.step};
  if (have_last_ && !(last_ < key)) {
    throw OrderError("record (episode " + std::to_string(rec.episode) + ", step " + std::to_string(rec.step) +
                     ") does not follow (episode " + std::to_string(last_.first) + ", step " +
                     std::to_string(last_.second) + ")");
  }
  if (!have_last_ || rec.episode != last_.first) ++episodes_;
  have_last_ = true;
  last_ = key;

  std::string line = encode_record(rec);
  line.push_back('\n');
  hash_->update(line);
  out_.write(line.data(), static_cast<std::streamsize>(line.size()));
  if (!out_) {
    fail_cleanup();
    throw DatasetError("write to " + tmp_records_.string() + " failed");
  }
  ++records_;
}

DatasetManifest DatasetWriter::finalize() {
  if (finalized_) throw DatasetError("dataset already finalized");
  out_.flush();
  out_.close();
  if (out_.fail()) {
    fail_cleanup();
    throw DatasetError("flushing " + tmp_records_.string() + " failed");
  }
  manifest_.format_version = kFormatVersion;
  manifest_.record_count = records_;
  manifest_.episode_count = episodes_;
  manifest_.checksum = hash_->hex();

  const fs::path tmp_manifest = dir_ / (std::string(kManifestFile) + ".tmp");
  {
    std::ofstream m(tmp_manifest, std::ios::binary | std::ios::trunc);
    m << to_json(manifest_).dump(2) << '\n';
    m.close();
    if (m.fail()) {
      fail_cleanup();
      throw DatasetError("writing " + tmp_manifest.string() + " failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp_records_, dir_ / kRecordsFile, ec);
  if (!ec) fs::rename(tmp_manifest, dir_ / kManifestFile, ec);
  if (ec) {
    fail_cleanup();
    throw DatasetError("finalizing dataset in " + dir_.string() + ": " + ec.message());
  }
  finalized_ = true;
  return manifest_;
}

void OrderedRecordSink::submit(std::uint64_t index, std::vector<EpisodeRecord> batch) {
  std::lock_guard lock(mu_);
  if (index < next_ || pending_.contains(index)) {
    throw OrderError("episode " + std::to_string(index) + " submitted twice");
  }
  pending_.emplace(index, std::move(batch));
  for (auto it = pending_.begin(); it != pending_.end() && it->first == next_; it = pending_.erase(it)) {
    for (const auto& rec : it->second) writer_.write(rec);
    ++next_;
  }
}

std::uint64_t OrderedRecordSink::next_index() const {
  std::lock_guard lock(mu_);
  return next_;
}

std::size_t OrderedRecordSink::pending() const {
  std::lock_guard lock(mu_);
  return pending_.size();
}

DatasetReader::DatasetReader(const fs::path& dir) {
  const fs::path manifest_path = dir / kManifestFile;
  std::ifstream mf(manifest_path);
  if (!mf) throw SchemaError("missing " + manifest_path.string());
  json mj;
  try {
    mj = json::parse(mf);
  } catch (const json::exception& e) {
    throw SchemaError("manifest is not valid JSON: " + std::string(e.what()));
  }
  if (!mj.is_object() || !mj.contains("format_version") || !mj["format_version"].is_number_integer()) {
    throw SchemaError("manifest lacks an integer format_version");
  }
  if (mj["format_version"].get<int>() != kFormatVersion) {
    throw VersionMismatchError("dataset format version " + mj["format_version"].dump() + " is not supported (expected " +
                               std::to_string(kFormatVersion) + ")");
  }
  manifest_ = manifest_from_json(mj);
  provenance_ = provenance_from_config(manifest_.config);

  const fs::path records_path = dir / kRecordsFile;
  std::ifstream scan(records_path, std::ios::binary);
  if (!scan) throw SchemaError("missing " + records_path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  std::string line;
  std::uint64_t lines = 0;
  std::set<std::uint64_t> episodes;
  try {
    while (std::getline(scan, line)) {
      ++lines;
      if (!scan.eof()) line.push_back('\n');
      EVP_DigestUpdate(ctx, line.data(), line.size());
      if (!line.empty() && line.back() == '\n') line.pop_back();
      const SerializedRecord r = decode_record(line, lines);
      episodes.insert(r.episode);
    }
  } catch (...) {
    EVP_MD_CTX_free(ctx);
    throw;
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);

  if (lines != manifest_.record_count) {
    throw CountMismatchError("manifest declares " + std::to_string(manifest_.record_count) + " records, file holds " +
                             std::to_string(lines));
  }
  if (episodes.size() != manifest_.episode_count) {
    throw CountMismatchError("manifest declares " + std::to_string(manifest_.episode_count) +
                             " episodes, file holds " + std::to_string(episodes.size()));
  }
  if (to_hex(md, len) != manifest_.checksum) throw ChecksumError("records file checksum does not match the manifest");

  in_.open(records_path, std::ios::binary);
  if (!in_) throw SchemaError("cannot reopen " + records_path.string());
}

bool DatasetReader::next(SerializedRecord& rec) {
  std::string line;
  if (!std::getline(in_, line)) return false;
  ++line_no_;
  rec = decode_record(line, line_no_);
  return true;
}

std::pair<DatasetManifest, std::vector<SerializedRecord>> read_dataset(const fs::path& dir) {
  DatasetReader reader(dir);
  std::vector<SerializedRecord> out;
  out.reserve(reader.manifest().record_count);
  SerializedRecord r;
  while (reader.next(r)) out.push_back(r);
  return {reader.manifest(), std::move(out)};
}

}  // namespace fieldgen
