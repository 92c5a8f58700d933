#include "vigil/profile.hpp"

#include <stdexcept>

namespace vigil {

json profile_to_json(const BehavioralProfile& p) {
  json models = json::object();
  for (const auto& [kind, model] : p.models) {
    json mj;
    mj["n"] = model.total_messages;
    mj["entries"] = model.entries;
    if (!model.smoothed_entries.empty()) mj["smoothed"] = model.smoothed_entries;
    models[feature_kind_name(kind)] = std::move(mj);
  }
  json j;
  j["account_id"] = p.account_id;
  j["trained_on"] = p.trained_on;
  j["trained_at"] = format_rfc3339(p.trained_at);
  j["models"] = std::move(models);
  return j;
}

BehavioralProfile profile_from_json(const json& j) {
  BehavioralProfile p;
  p.account_id = j.at("account_id").get<std::string>();
  p.trained_on = j.at("trained_on").get<std::int64_t>();
  auto ts = parse_rfc3339(j.at("trained_at").get<std::string>());
  if (!ts) throw std::runtime_error("profile: bad trained_at");
  p.trained_at = *ts;
  for (const auto& [name, mj] : j.at("models").items()) {
    auto kind = feature_kind_from_name(name);
    if (!kind) throw std::runtime_error("profile: unknown feature kind " + name);
    FeatureModel model;
    model.kind = *kind;
    model.total_messages = mj.at("n").get<std::int64_t>();
    model.entries =
        mj.at("entries").get<std::map<std::string, std::int64_t>>();
    if (mj.contains("smoothed"))
      model.smoothed_entries =
          mj.at("smoothed").get<std::map<std::string, double>>();
    p.models.emplace(*kind, std::move(model));
  }
  return p;
}

}  // namespace vigil
