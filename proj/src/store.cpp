#include "vigil/store.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "vigil/language.hpp"

namespace vigil {

namespace fs = std::filesystem;

ProfileStore::ProfileStore(std::string root) : root_(std::move(root)) {
  fs::create_directories(fs::path(root_) / "profiles");
}

std::string ProfileStore::path_for(const std::string& account_id) const {
  // Account ids are opaque; escape anything unsafe for a filename.
  std::string name;
  for (unsigned char c : account_id) {
    if (std::isalnum(c) || c == '_' || c == '-') {
      name.push_back(static_cast<char>(c));
    } else {
      char buf[4];
      std::snprintf(buf, sizeof(buf), "%%%02X", c);
      name += buf;
    }
  }
  return (fs::path(root_) / "profiles" / (name + ".json")).string();
}

void ProfileStore::save(const BehavioralProfile& profile) const {
  json body = profile_to_json(profile);
  json doc;
  doc["version"] = kFormatVersion;
  doc["checksum"] = std::to_string(fnv1a64(body.dump()));
  doc["profile"] = std::move(body);

  const std::string path = path_for(profile.account_id);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write profile " + path);
    out << doc.dump() << "\n";
  }
  fs::rename(tmp, path);  // last writer wins
}

std::optional<BehavioralProfile> ProfileStore::load(
    const std::string& account_id) const {
  const std::string path = path_for(account_id);
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    json doc = json::parse(buf.str());
    if (doc.at("version").get<int>() != kFormatVersion)
      throw std::runtime_error("unsupported profile version");
    json body = doc.at("profile");
    if (doc.at("checksum").get<std::string>() !=
        std::to_string(fnv1a64(body.dump())))
      throw std::runtime_error("checksum mismatch");
    return profile_from_json(body);
  } catch (const std::exception& e) {
    throw CorruptProfileError("corrupt profile for " + account_id + ": " +
                              e.what());
  }
}

}  // namespace vigil
