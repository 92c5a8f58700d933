#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "vigil/profile.hpp"

namespace vigil {

class CorruptProfileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One JSON document per account under a store root. Each document embeds a
// format version and a content checksum; loads verify both.
class ProfileStore {
 public:
  static constexpr int kFormatVersion = 1;

  explicit ProfileStore(std::string root);

  void save(const BehavioralProfile& profile) const;

  // nullopt when no profile exists for the account. Throws
  // CorruptProfileError on checksum or format mismatch.
  std::optional<BehavioralProfile> load(const std::string& account_id) const;

  std::string path_for(const std::string& account_id) const;
  const std::string& root() const { return root_; }

 private:
  std::string root_;
};

}  // namespace vigil
