#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fieldgen/sampler.hpp"

namespace fieldgen {

inline constexpr int kFormatVersion = 1;
inline constexpr const char* kFormatName = "fieldgen-episodes";
inline constexpr const char* kManifestFile = "manifest.json";
inline constexpr const char* kRecordsFile = "records.jsonl";

struct DatasetManifest {
  int format_version = kFormatVersion;
  nlohmann::json config = nlohmann::json::object();  // resolved scenario config
  std::string config_text;                           // config file as given, verbatim
  std::uint64_t master_seed = 0;
  std::uint64_t episode_count = 0;
  std::uint64_t record_count = 0;
  std::string checksum;  // sha256 of records.jsonl, lowercase hex
};

nlohmann::json to_json(const DatasetManifest& m);
/// Throws SchemaError on missing or mistyped fields.
DatasetManifest manifest_from_json(const nlohmann::json& j);

inline constexpr std::size_t kActionWidth = 7;  // dp (3), dw (3), gripper (1)
inline constexpr std::size_t kActionBlock = kChunkSize * kActionWidth;

/// Flat, fixed-order form of an EpisodeRecord; what one records.jsonl line holds.
struct SerializedRecord {
  std::uint64_t episode = 0;
  std::uint64_t step = 0;
  std::uint64_t seed = 0;
  std::array<double, 6> pose{};  // position (m), orientation axis-angle (rad)
  std::uint8_t gripper = 0;
  std::array<double, kActionBlock> actions{};
  std::optional<double> reward;
  std::optional<std::string> image_path;

  bool operator==(const SerializedRecord&) const = default;
};

SerializedRecord to_serialized(const EpisodeRecord& rec);
/// Provenance fields not stored per line (curve, level, beta) come from `defaults`.
EpisodeRecord to_episode_record(const SerializedRecord& rec, const Provenance& defaults = {});

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

/// One canonical JSON line, no trailing newline, ending with its integrity tag.
std::string encode_record(const SerializedRecord& rec);
/// Throws ChecksumError (damaged line) or SchemaError, both carrying `line_no`.
SerializedRecord decode_record(std::string_view line, std::size_t line_no = 0);

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& file);

/**
 * Streaming writer for a dataset directory.
 *
 * Records go to a temporary file; finalize() writes the manifest and renames
 * both files into place. A writer destroyed before finalize() removes its
 * temporary files.
 */
class DatasetWriter {
 public:
  DatasetWriter(std::filesystem::path dir, DatasetManifest header);
  ~DatasetWriter();
  DatasetWriter(const DatasetWriter&) = delete;
  DatasetWriter& operator=(const DatasetWriter&) = delete;

  /// Throws OrderError unless (episode, step) is strictly greater than the previous record's.
  void write(const SerializedRecord& rec);
  void write(const EpisodeRecord& rec) { write(to_serialized(rec)); }
  DatasetManifest finalize();

  std::uint64_t records_written() const { return records_; }

 private:
  struct HashState;
  void fail_cleanup() noexcept;

  std::filesystem::path dir_;
  std::filesystem::path tmp_records_;
  DatasetManifest manifest_;
  std::ofstream out_;
  std::unique_ptr<HashState> hash_;
  std::vector<char> buffer_;
  std::uint64_t records_ = 0;
  std::uint64_t episodes_ = 0;
  bool have_last_ = false;
  std::pair<std::uint64_t, std::uint64_t> last_{0, 0};
  bool finalized_ = false;
};

/**
 * Hands episode batches from concurrent producers to a single writer in
 * episode-index order. Batches that arrive early are buffered.
 */
class OrderedRecordSink {
 public:
  explicit OrderedRecordSink(DatasetWriter& writer, std::uint64_t first_index = 0)
      : writer_(writer), next_(first_index) {}

  void submit(std::uint64_t index, std::vector<EpisodeRecord> batch);
  std::uint64_t next_index() const;
  std::size_t pending() const;

 private:
  DatasetWriter& writer_;
  mutable std::mutex mu_;
  std::uint64_t next_;
  std::map<std::uint64_t, std::vector<EpisodeRecord>> pending_;
};

/**
 * Validating reader.
 *
 * Construction checks the manifest version, every line's integrity tag, the
 * record and episode counts and the file checksum, in that order; records are
 * then streamed with next().
 */
class DatasetReader {
 public:
  explicit DatasetReader(const std::filesystem::path& dir);

  const DatasetManifest& manifest() const { return manifest_; }
  /// False at end of file.
  bool next(SerializedRecord& rec);
  /// Provenance implied by the manifest's config (curve, level, beta).
  const Provenance& provenance() const { return provenance_; }

 private:
  DatasetManifest manifest_;
  std::ifstream in_;
  std::size_t line_no_ = 0;
  Provenance provenance_;
};

std::pair<DatasetManifest, std::vector<SerializedRecord>> read_dataset(const std::filesystem::path& dir);

}  // namespace fieldgen
