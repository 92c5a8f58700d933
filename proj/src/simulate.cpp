#include "vigil/simulate.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include "vigil/message.hpp"

namespace vigil {

namespace {

// Common words per bundled language; habitual message text is sampled from
// these so the language models see realistic, classifiable content.
const std::map<std::string, std::vector<std::string>>& word_pools() {
  static const std::map<std::string, std::vector<std::string>> pools = {
      {"en", {"the",     "and",     "was",    "with",    "for",     "today",
              "morning", "coffee",  "news",   "reading", "about",   "great",
              "little",  "house",   "garden", "weather", "sunny",   "rain",
              "friends", "weekend", "dinner", "music",   "evening", "train",
              "office",  "project", "photos", "travel",  "beach",   "mountain",
              "winter",  "summer",  "book",   "game",    "team",    "city"}},
      {"de", {"der",     "die",        "das",    "und",       "ist",
              "mit",     "für",        "heute",  "morgen",    "kaffee",
              "zeitung", "nachrichten", "lesen", "über",      "schön",
              "klein",   "haus",       "garten", "wetter",    "sonnig",
              "regen",   "freunde",    "wochenende", "abendessen", "musik",
              "abend",   "zug",        "arbeit", "projekt",   "fotos",
              "reise",   "strand",     "berge",  "winter",    "sommer",
              "buch",    "spiel",      "mannschaft", "stadt"}},
      {"es", {"el",      "la",      "los",     "y",       "es",       "con",
              "para",    "hoy",     "mañana",  "café",    "noticias", "leyendo",
              "sobre",   "bonito",  "pequeño", "casa",    "jardín",   "tiempo",
              "soleado", "lluvia",  "amigos",  "semana",  "cena",     "música",
              "noche",   "tren",    "oficina", "proyecto", "fotos",   "viaje",
              "playa",   "montaña", "invierno", "verano", "libro",    "juego",
              "equipo",  "ciudad"}},
      {"fr", {"le",      "la",      "les",     "et",      "est",     "avec",
              "pour",    "matin",   "café",    "nouvelles", "lecture", "sur",
              "joli",    "petit",   "maison",  "jardin",  "temps",   "pluie",
              "amis",    "weekend", "musique", "soir",    "train",   "bureau",
              "projet",  "photos",  "voyage",  "plage",   "montagne", "hiver",
              "livre",   "jeu",     "ville",   "toujours", "demain", "semaine"}},
      {"it", {"il",      "la",       "gli",     "e",       "con",     "per",
              "oggi",    "domani",   "caffè",   "notizie", "leggere", "sopra",
              "bello",   "piccolo",  "casa",    "giardino", "tempo",  "pioggia",
              "amici",   "settimana", "cena",   "musica",  "sera",    "treno",
              "ufficio", "progetto", "foto",    "viaggio", "spiaggia", "montagna",
              "inverno", "estate",   "libro",   "gioco",   "squadra", "città"}},
      {"pt", {"o",       "os",       "e",       "com",     "para",    "hoje",
              "amanhã",  "café",     "notícias", "lendo",  "sobre",   "bonito",
              "pequeno", "casa",     "jardim",  "tempo",   "chuva",   "amigos",
              "semana",  "jantar",   "música",  "noite",   "trem",    "escritório",
              "projeto", "fotos",    "viagem",  "praia",   "montanha", "inverno",
              "verão",   "livro",    "jogo",    "equipe",  "cidade",  "sempre"}},
      {"nl", {"de",        "het",    "en",     "is",      "met",    "voor",
              "vandaag",   "morgen", "koffie", "nieuws",  "lezen",  "over",
              "mooi",      "klein",  "huis",   "tuin",    "weer",   "zonnig",
              "regen",     "vrienden", "weekend", "avondeten", "muziek", "avond",
              "trein",     "kantoor", "project", "fotos",  "reis",   "strand",
              "bergen",    "winter", "zomer",  "boek",    "spel",   "stad"}},
  };
  return pools;
}

struct AccountHabits {
  std::string id;
  std::string language;
  int band_start = 8;   // active hours [band_start, band_start + band_len)
  int band_len = 10;
  std::vector<std::string> sources;  // first entry dominates
  double p_link = 0.0;
  std::vector<std::string> domains;
  double p_mention = 0.0;
  std::vector<std::string> circle;
  double p_hashtag = 0.0;
  std::vector<std::string> hashtags;
};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  int range(int lo, int hi) {  // inclusive
    return static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1)) + lo;
  }
  std::size_t index(std::size_t n) { return engine_() % n; }
  double unit() { return (engine_() >> 11) * (1.0 / 9007199254740992.0); }
  bool chance(double p) { return unit() < p; }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

std::string pick(Rng& rng, const std::vector<std::string>& pool) {
  return pool[rng.index(pool.size())];
}

std::string habitual_text(Rng& rng, const AccountHabits& habits) {
  const auto& pool = word_pools().at(habits.language);
  const int words = rng.range(6, 12);
  std::string text;
  for (int i = 0; i < words; ++i) {
    if (i) text += ' ';
    text += pick(rng, pool);
  }
  return text;
}

int in_band_hour(Rng& rng, const AccountHabits& habits) {
  return (habits.band_start + rng.range(0, habits.band_len - 1)) % 24;
}

std::string substitute(std::string text, const std::string& token,
                       const std::string& value) {
  for (std::size_t pos = text.find(token); pos != std::string::npos;
       pos = text.find(token, pos)) {
    text.replace(pos, token.size(), value);
    pos += value.size();
  }
  return text;
}

// Last four whitespace tokens of the template; used as the shared tail that
// keeps stealthy campaign messages groupable.
std::string template_tail(const std::string& template_text) {
  std::istringstream in(template_text);
  std::vector<std::string> tokens;
  std::string t;
  while (in >> t) tokens.push_back(t);
  if (tokens.size() < 4) return template_text;
  std::string tail;
  for (std::size_t i = tokens.size() - 4; i < tokens.size(); ++i) {
    if (!tail.empty()) tail += ' ';
    tail += tokens[i];
  }
  return tail;
}

void write_sorted_jsonl(std::ostream& out, std::vector<Message>& messages) {
  std::sort(messages.begin(), messages.end(),
            [](const Message& a, const Message& b) {
              if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
              return a.message_id < b.message_id;
            });
  for (const auto& m : messages) out << message_to_json(m).dump() << "\n";
}

StealthSpec parse_stealth(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "none") return StealthSpec::none();
    if (s == "all") return StealthSpec::all();
    throw SimSpecError("campaigns[].stealth: unknown level '" + s + "'");
  }
  if (!j.is_array())
    throw SimSpecError("campaigns[].stealth: expected \"none\", \"all\" or a feature list");
  StealthSpec spec;
  for (const auto& item : j) {
    const std::string f = item.get<std::string>();
    if (f == "source") spec.source = true;
    else if (f == "time_of_day") spec.time_of_day = true;
    else if (f == "language" || f == "text") spec.language_text = true;
    else if (f == "link") spec.link = true;
    else if (f == "direct_interaction") spec.mentions = true;
    else if (f == "topic") spec.hashtags = true;
    else throw SimSpecError("campaigns[].stealth: unknown feature '" + f + "'");
  }
  return spec;
}

}  // namespace

StealthSpec StealthSpec::all() {
  StealthSpec s;
  s.source = s.time_of_day = s.language_text = s.link = s.mentions =
      s.hashtags = true;
  return s;
}

SimSpec sim_spec_from_json(const json& j) {
  if (!j.is_object()) throw SimSpecError("sim spec: not a JSON object");
  SimSpec spec;
  try {
    if (j.contains("accounts")) spec.accounts = j.at("accounts").get<std::size_t>();
    if (j.contains("account_prefix"))
      spec.account_prefix = j.at("account_prefix").get<std::string>();
    if (j.contains("history")) {
      const auto& h = j.at("history");
      if (h.contains("messages_min"))
        spec.history_messages_min = h.at("messages_min").get<int>();
      if (h.contains("messages_max"))
        spec.history_messages_max = h.at("messages_max").get<int>();
      if (h.contains("days")) spec.history_days = h.at("days").get<int>();
    }
    if (j.contains("window")) {
      const auto& w = j.at("window");
      if (w.contains("start")) {
        auto ts = parse_rfc3339(w.at("start").get<std::string>());
        if (!ts) throw SimSpecError("window.start: not an RFC 3339 timestamp");
        spec.window_start = *ts;
      }
      if (w.contains("seconds"))
        spec.window_seconds = w.at("seconds").get<std::int64_t>();
      if (w.contains("benign_messages"))
        spec.window_benign_messages = w.at("benign_messages").get<std::size_t>();
    }
    if (j.contains("languages"))
      spec.languages = j.at("languages").get<std::vector<std::string>>();
    if (j.contains("sources"))
      spec.sources = j.at("sources").get<std::vector<std::string>>();
    if (j.contains("link_domains"))
      spec.link_domains = j.at("link_domains").get<std::vector<std::string>>();
    if (j.contains("hashtag_pool"))
      spec.hashtag_pool = j.at("hashtag_pool").get<std::vector<std::string>>();
    if (j.contains("campaigns")) {
      for (const auto& cj : j.at("campaigns")) {
        CampaignSpec c;
        if (cj.contains("app")) c.app = cj.at("app").get<std::string>();
        if (cj.contains("template"))
          c.template_text = cj.at("template").get<std::string>();
        if (cj.contains("url")) c.url = cj.at("url").get<std::string>();
        if (cj.contains("victims")) c.victims = cj.at("victims").get<std::size_t>();
        if (cj.contains("start_offset_seconds"))
          c.start_offset_seconds = cj.at("start_offset_seconds").get<std::int64_t>();
        if (cj.contains("spacing_seconds"))
          c.spacing_seconds = cj.at("spacing_seconds").get<std::int64_t>();
        if (cj.contains("stealth")) c.stealth = parse_stealth(cj.at("stealth"));
        spec.campaigns.push_back(std::move(c));
      }
    }
  } catch (const json::exception& e) {
    throw SimSpecError(std::string("sim spec: ") + e.what());
  }

  if (spec.accounts == 0) throw SimSpecError("accounts: must be positive");
  if (spec.history_messages_min < 1 ||
      spec.history_messages_max < spec.history_messages_min)
    throw SimSpecError("history.messages_min/max: invalid range");
  if (spec.history_days < 1) throw SimSpecError("history.days: must be >= 1");
  if (spec.window_seconds <= 0) throw SimSpecError("window.seconds: must be positive");
  if (spec.languages.empty()) throw SimSpecError("languages: must not be empty");
  for (const auto& lang : spec.languages)
    if (!word_pools().count(lang))
      throw SimSpecError("languages: no word pool for '" + lang + "'");
  if (spec.sources.empty()) throw SimSpecError("sources: must not be empty");
  for (const auto& c : spec.campaigns)
    if (c.victims > spec.accounts)
      throw SimSpecError("campaigns[].victims: more victims than accounts");
  return spec;
}

SimSpec load_sim_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SimSpecError("cannot open sim spec " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    // nlohmann reports the byte offset and line context of the failure
    throw SimSpecError(std::string("sim spec parse error: ") + e.what());
  }
  return sim_spec_from_json(j);
}

SimulateResult run_simulate(const SimSpec& spec, std::uint64_t seed,
                            std::ostream& history_out, std::ostream& stream_out,
                            std::ostream& truth_out) {
  Rng rng(seed ^ 0x5EEDF00DULL);
  SimulateResult result;

  // Victim selection first: time-stealth campaigns need the victims'
  // activity bands to cover the window hour.
  std::vector<std::size_t> order(spec.accounts);
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<std::vector<std::size_t>> victims_per_campaign;
  std::vector<bool> covers_window_hour(spec.accounts, false);
  for (const auto& campaign : spec.campaigns) {
    std::shuffle(order.begin(), order.end(), rng.engine());
    std::vector<std::size_t> victims(order.begin(),
                                     order.begin() + campaign.victims);
    std::sort(victims.begin(), victims.end());
    if (campaign.stealth.time_of_day)
      for (std::size_t v : victims) covers_window_hour[v] = true;
    victims_per_campaign.push_back(std::move(victims));
  }

  const int window_hour = hour_of_day(spec.window_start, 0);
  std::vector<AccountHabits> habits(spec.accounts);
  for (std::size_t i = 0; i < spec.accounts; ++i) {
    AccountHabits& h = habits[i];
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s%05zu", spec.account_prefix.c_str(), i);
    h.id = buf;
    h.language = pick(rng, spec.languages);
    h.band_start = rng.range(6, 14);
    h.band_len = rng.range(8, 13);
    if (covers_window_hour[i]) h.band_start = window_hour;  // band covers window
    h.sources.push_back(pick(rng, spec.sources));
    if (rng.chance(0.5)) {
      std::string second = pick(rng, spec.sources);
      if (second != h.sources[0]) h.sources.push_back(second);
    }
    h.p_link = rng.chance(0.3) ? 0.0 : 0.2 + 0.7 * rng.unit();
    h.domains.push_back(pick(rng, spec.link_domains));
    if (rng.chance(0.4)) h.domains.push_back(pick(rng, spec.link_domains));
    h.p_mention = 0.7 * rng.unit();
    for (int c = 0; c < 3; ++c) {
      std::size_t other = rng.index(spec.accounts);
      if (other != i) {
        std::snprintf(buf, sizeof(buf), "%s%05zu", spec.account_prefix.c_str(),
                      other);
        h.circle.push_back(buf);
      }
    }
    if (h.circle.empty()) h.p_mention = 0.0;
    h.p_hashtag = 0.5 * rng.unit();
    h.hashtags.push_back(pick(rng, spec.hashtag_pool));
    if (rng.chance(0.5)) h.hashtags.push_back(pick(rng, spec.hashtag_pool));
  }

  std::size_t next_id = 0;
  auto make_id = [&next_id]() {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "m%07zu", next_id++);
    return std::string(buf);
  };

  auto habitual_message = [&](const AccountHabits& h, Instant ts) {
    Message m;
    m.message_id = make_id();
    m.account_id = h.id;
    m.timestamp = ts;
    m.text = habitual_text(rng, h);
    m.source_app = (h.sources.size() > 1 && rng.chance(0.2)) ? h.sources[1]
                                                             : h.sources[0];
    if (h.p_link > 0.0 && rng.chance(h.p_link)) {
      const std::string& domain = h.domains[rng.index(h.domains.size())];
      m.urls.push_back("http://" + domain + "/p/" +
                       std::to_string(rng.range(1, 9999)));
    }
    if (rng.chance(h.p_mention)) {
      const std::string& who = h.circle[rng.index(h.circle.size())];
      m.mentions.push_back(who);
      m.text += " @" + who;
    }
    if (rng.chance(h.p_hashtag)) {
      const std::string& tag = h.hashtags[rng.index(h.hashtags.size())];
      m.hashtags.push_back(tag);
      m.text += " #" + tag;
    }
    return m;
  };

  // Training history: habitual messages strictly before the window.
  std::vector<Message> history;
  for (const auto& h : habits) {
    const int count = rng.range(spec.history_messages_min,
                                spec.history_messages_max);
    for (int k = 0; k < count; ++k) {
      const int day_offset = rng.range(1, spec.history_days);
      const Instant day_base =
          ((spec.window_start - day_offset * 86400) / 86400) * 86400;
      const Instant ts = day_base + in_band_hour(rng, h) * 3600 +
                         rng.range(0, 59) * 60 + rng.range(0, 59);
      history.push_back(habitual_message(h, ts));
    }
  }
  result.history_messages = history.size();

  // Observation window: benign traffic plus injected campaigns.
  std::vector<Message> window;
  for (std::size_t k = 0; k < spec.window_benign_messages; ++k) {
    const AccountHabits& h = habits[rng.index(spec.accounts)];
    const Instant ts =
        spec.window_start + static_cast<std::int64_t>(
                                rng.unit() * static_cast<double>(spec.window_seconds - 1));
    window.push_back(habitual_message(h, ts));
  }

  std::vector<std::pair<std::string, std::string>> truth;  // account, message
  for (std::size_t c = 0; c < spec.campaigns.size(); ++c) {
    const CampaignSpec& campaign = spec.campaigns[c];
    const std::string tail = template_tail(campaign.template_text);
    for (std::size_t v = 0; v < victims_per_campaign[c].size(); ++v) {
      const AccountHabits& victim = habits[victims_per_campaign[c][v]];
      Instant ts = spec.window_start + campaign.start_offset_seconds +
                   static_cast<std::int64_t>(v) * campaign.spacing_seconds;
      if (ts >= spec.window_start + spec.window_seconds)
        ts = spec.window_start + spec.window_seconds - 1;

      Message m;
      m.message_id = make_id();
      m.account_id = victim.id;
      m.timestamp = ts;
      m.source_app = campaign.stealth.source ? victim.sources[0] : campaign.app;
      if (campaign.stealth.language_text) {
        std::string lead;
        const auto& pool = word_pools().at(victim.language);
        const int words = rng.range(5, 8);
        for (int i = 0; i < words; ++i) {
          if (i) lead += ' ';
          lead += pick(rng, pool);
        }
        m.text = lead + " " + tail;
      } else {
        m.text = campaign.template_text;
      }
      if (campaign.stealth.link) {
        if (victim.p_link > 0.0)
          m.urls.push_back("http://" + victim.domains[0] + "/p/" +
                           std::to_string(rng.range(1, 9999)));
      } else if (!campaign.url.empty()) {
        m.urls.push_back(substitute(campaign.url, "{n}", std::to_string(v)));
      }
      if (campaign.stealth.mentions && victim.p_mention > 0.0)
        m.mentions.push_back(victim.circle[0]);
      if (campaign.stealth.hashtags && !victim.hashtags.empty() &&
          victim.p_hashtag > 0.0)
        m.hashtags.push_back(victim.hashtags[0]);

      truth.emplace_back(m.account_id, m.message_id);
      window.push_back(std::move(m));
      ++result.campaign_messages;
    }
  }
  result.window_messages = window.size();

  write_sorted_jsonl(history_out, history);
  write_sorted_jsonl(stream_out, window);
  for (const auto& [account, message] : truth)
    truth_out << json{{"account_id", account}, {"message_id", message}}.dump()
              << "\n";
  return result;
}

}  // namespace vigil
