#include "novamaze/search/record_store.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace novamaze::search {
namespace fs = std::filesystem;

namespace {

constexpr std::string_view kPrefix = "record-";

long sequence_of(const std::string& id) {
  if (id.rfind(kPrefix, 0) != 0) return 0;
  try {
    return std::stol(id.substr(kPrefix.size()));
  } catch (const std::exception&) {
    return 0;
  }
}

}  // namespace

RecordStore::RecordStore(fs::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw std::runtime_error("cannot create record directory " + dir_.string() + ": " + ec.message());
  for (const auto& id : ids()) next_ = std::max(next_, sequence_of(id) + 1);
}

RunRecord RecordStore::save(RunRecord record) {
  std::lock_guard lock(mutex_);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06ld", next_++);
  record.record_id = std::string(kPrefix) + buf;
  write(record);
  return record;
}

void RecordStore::save_as(const RunRecord& record) {
  if (record.record_id.empty() || record.record_id.find('/') != std::string::npos) {
    throw std::invalid_argument("record id must be a nonempty file name");
  }
  std::lock_guard lock(mutex_);
  next_ = std::max(next_, sequence_of(record.record_id) + 1);
  write(record);
}

void RecordStore::write(const RunRecord& record) {
  const fs::path target = dir_ / (record.record_id + ".json");
  const fs::path tmp = dir_ / (record.record_id + ".json.tmp");
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << to_json(record).dump(1) << '\n';
    out.flush();
    if (!out) throw std::runtime_error("failed writing record " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw std::runtime_error("failed storing record " + target.string() + ": " + ec.message());
}

std::vector<std::string> RecordStore::ids() const {
  std::vector<std::string> out;
  for (const auto& entry : fs::directory_iterator(dir_)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") out.push_back(entry.path().stem().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

RunRecord RecordStore::load(const std::string& record_id) const {
  std::ifstream in(dir_ / (record_id + ".json"));
  if (!in) throw std::invalid_argument("no record '" + record_id + "'");
  return run_record_from_json(nlohmann::json::parse(in));
}

std::vector<RunRecord> RecordStore::load_all() const {
  std::vector<RunRecord> out;
  for (const auto& id : ids()) out.push_back(load(id));
  return out;
}

}  // namespace novamaze::search
