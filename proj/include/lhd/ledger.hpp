#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>

#include "json.hpp"
#include "lhd/design_io.hpp"

namespace lhd {

struct LedgerEntry {
  std::int64_t dmin_sq = 0;
  std::string design_path;
  std::uint64_t seed = 0;
  nlohmann::json params;
  std::string timestamp;
};

/// Best-known minimum distance per instance, persisted as one JSON file
/// keyed by "k/n". An entry only ever improves, and only after its design
/// file has been re-verified from disk.
class HighscoreLedger {
 public:
  explicit HighscoreLedger(std::filesystem::path path) : path_(std::move(path)) {}

  /// Missing file loads as an empty ledger; a malformed one is an error.
  static HighscoreLedger load(const std::filesystem::path& path) {
    HighscoreLedger ledger(path);
    std::ifstream in(path);
    if (!in) return ledger;
    nlohmann::json doc;
    try {
      in >> doc;
      for (const auto& [key, value] : doc.items()) {
        LedgerEntry entry;
        entry.dmin_sq = value.at("dmin_sq").get<std::int64_t>();
        entry.design_path = value.at("design_path").get<std::string>();
        entry.seed = value.at("seed").get<std::uint64_t>();
        entry.params = value.value("params", nlohmann::json(nullptr));
        entry.timestamp = value.value("timestamp", std::string());
        ledger.entries_[key] = std::move(entry);
      }
    } catch (const nlohmann::json::exception& e) {
      throw DesignIoError("ledger file is malformed: " + std::string(e.what()));
    }
    return ledger;
  }

  const std::filesystem::path& path() const { return path_; }
  const std::map<std::string, LedgerEntry>& entries() const { return entries_; }

  static std::string key_for(const InstanceSpec& inst) {
    return std::to_string(inst.k) + "/" + std::to_string(inst.n);
  }

  std::optional<LedgerEntry> lookup(const InstanceSpec& inst) const {
    const auto it = entries_.find(key_for(inst));
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  /// Accepts the candidate only if it strictly beats the stored score and
  /// its design file re-verifies against the offered instance and value.
  bool offer(const InstanceSpec& inst, LedgerEntry candidate) {
    const std::string key = key_for(inst);
    const auto it = entries_.find(key);
    if (it != entries_.end() && it->second.dmin_sq >= candidate.dmin_sq) return false;

    const LoadedDesign design = load_design(candidate.design_path);
    if (design.config.instance() != inst || design.dmin_sq != candidate.dmin_sq)
      return false;

    entries_[key] = std::move(candidate);
    return true;
  }

  /// Write-to-temp then rename, so a crash never leaves a half-written file.
  void save() const {
    nlohmann::json doc = nlohmann::json::object();
    for (const auto& [key, entry] : entries_) {
      nlohmann::json& value = doc[key];
      value["dmin_sq"] = entry.dmin_sq;
      value["design_path"] = entry.design_path;
      value["seed"] = entry.seed;
      if (!entry.params.is_null()) value["params"] = entry.params;
      if (!entry.timestamp.empty()) value["timestamp"] = entry.timestamp;
    }
    std::filesystem::path tmp = path_;
    tmp += ".tmp";
    {
      std::ofstream out(tmp);
      if (!out) throw DesignIoError("cannot write ledger file: " + tmp.string());
      out << doc.dump(2) << '\n';
      if (!out) throw DesignIoError("short write on ledger file: " + tmp.string());
    }
    std::filesystem::rename(tmp, path_);
  }

 private:
  std::filesystem::path path_;
  std::map<std::string, LedgerEntry> entries_;
};

}  // namespace lhd
