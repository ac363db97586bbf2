#pragma once

#include <filesystem>
#include <mutex>
#include <string>
#include <vector>

#include "novamaze/search/run_record.hpp"

namespace novamaze::search {

// Directory of run records, one `<record_id>.json` file each. Writes go to a
// temporary file that is flushed and renamed into place.
class RecordStore {
 public:
  explicit RecordStore(std::filesystem::path dir);

  const std::filesystem::path& dir() const { return dir_; }

  // Assigns a fresh record id (overwriting record.record_id) and persists the
  // record. Throws std::runtime_error when the write fails.
  RunRecord save(RunRecord record);

  // Persists under `record.record_id`, replacing any record with that id.
  void save_as(const RunRecord& record);

  std::vector<std::string> ids() const;
  RunRecord load(const std::string& record_id) const;
  std::vector<RunRecord> load_all() const;

 private:
  void write(const RunRecord& record);

  std::filesystem::path dir_;
  mutable std::mutex mutex_;
  long next_ = 1;
};

}  // namespace novamaze::search
