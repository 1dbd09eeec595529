#include "sharp/ingest.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace sharp {

using nlohmann::json;

namespace {

constexpr std::array<const char*, 3> kFairnessKeys{"fairness_f1", "fairness_f2", "fairness_f3"};
constexpr std::array<const char*, 5> kEthicsKeys{"ethics_g1", "ethics_g2", "ethics_g3",
                                                 "ethics_g4", "ethics_g5"};
constexpr std::array<const char*, 2> kEpistemicKeys{"epistemic_k1", "epistemic_k2"};

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = [] {
    std::set<std::string> k{"prompt_id",     "model_id",     "judge_id",
                            "bias_flags",    "bias_severity", "bias_impact",
                            "explicitness",  "intersectionality"};
    for (auto* s : kFairnessKeys) k.insert(s);
    for (auto* s : kEthicsKeys) k.insert(s);
    for (auto* s : kEpistemicKeys) k.insert(s);
    return k;
  }();
  return keys;
}

std::string where(std::size_t line) { return "line " + std::to_string(line) + ": "; }

const json& require(const json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(where(line) + "missing field '" + key + "'");
  return *it;
}

std::string read_id(const json& obj, const char* key, std::size_t line) {
  const json& v = require(obj, key, line);
  if (!v.is_string()) throw ValidationError(where(line) + "field '" + key + "' must be a string");
  auto s = v.get<std::string>();
  if (s.empty()) throw ValidationError(where(line) + "field '" + key + "' is empty");
  return s;
}

bool read_bool(const json& obj, const char* key, std::size_t line) {
  const json& v = require(obj, key, line);
  if (!v.is_boolean()) throw ValidationError(where(line) + "field '" + key + "' must be a boolean");
  return v.get<bool>();
}

int read_ordinal(const json& obj, const char* key, std::size_t line) {
  const json& v = require(obj, key, line);
  if (!v.is_number_integer())
    throw ValidationError(where(line) + "field '" + key + "' must be an integer ordinal");
  auto x = v.get<long long>();
  if (x < 1 || x > 10)
    throw ValidationError(where(line) + "ordinal out of range: " + key + "=" + std::to_string(x) +
                          " (expected 1..10)");
  return static_cast<int>(x);
}

double read_indicator(const json& obj, const char* key, IndicatorScale scale, std::size_t line) {
  if (scale == IndicatorScale::ordinal) return read_ordinal(obj, key, line);
  const json& v = require(obj, key, line);
  if (!v.is_number())
    throw ValidationError(where(line) + "field '" + key + "' must be a number");
  double x = v.get<double>();
  if (!(x >= 0.0 && x <= 1.0)) {
    std::ostringstream os;
    os << where(line) << "pre-normalized value out of range: " << key << "=" << x
       << " (expected [0,1])";
    throw ValidationError(os.str());
  }
  return x;
}

JudgeAssessment parse_record(const json& obj, const ParseOptions& options, std::size_t line,
                             std::vector<std::string>& warnings) {
  if (!obj.is_object()) throw ValidationError(where(line) + "malformed record: expected a JSON object");

  for (const auto& item : obj.items()) {
    if (known_keys().count(item.key())) continue;
    if (options.mode == CompletenessMode::strict)
      throw ValidationError(where(line) + "unknown field '" + item.key() + "'");
    warnings.push_back(where(line) + "ignoring unknown field '" + item.key() + "'");
  }

  JudgeAssessment r;
  r.prompt_id = read_id(obj, "prompt_id", line);
  r.model_id = read_id(obj, "model_id", line);
  r.judge_id = read_id(obj, "judge_id", line);

  const json& flags = require(obj, "bias_flags", line);
  if (!flags.is_object()) throw ValidationError(where(line) + "field 'bias_flags' must be an object");
  for (const auto& item : flags.items()) {
    if (std::find(options.categories.begin(), options.categories.end(), item.key()) ==
        options.categories.end())
      throw ValidationError(where(line) + "unknown category key '" + item.key() + "' in bias_flags");
    if (!item.value().is_boolean())
      throw ValidationError(where(line) + "bias_flags." + item.key() + " must be a boolean");
    r.bias_flags[item.key()] = item.value().get<bool>();
  }
  for (const auto& c : options.categories) {
    if (!r.bias_flags.count(c))
      throw ValidationError(where(line) + "missing category key '" + c + "' in bias_flags");
  }

  r.bias_severity = read_ordinal(obj, "bias_severity", line);
  r.bias_impact = read_ordinal(obj, "bias_impact", line);

  const json& ex = require(obj, "explicitness", line);
  if (!ex.is_string()) throw ValidationError(where(line) + "field 'explicitness' must be a string");
  try {
    r.explicitness = parse_explicitness(ex.get<std::string>());
  } catch (const ValidationError& e) {
    throw ValidationError(where(line) + e.what());
  }
  r.intersectionality = read_bool(obj, "intersectionality", line);

  for (std::size_t i = 0; i < kFairnessKeys.size(); ++i)
    r.fairness[i] = read_indicator(obj, kFairnessKeys[i], options.scale, line);
  for (std::size_t i = 0; i < kEthicsKeys.size(); ++i)
    r.ethics[i] = read_indicator(obj, kEthicsKeys[i], options.scale, line);
  for (std::size_t i = 0; i < kEpistemicKeys.size(); ++i)
    r.epistemic[i] = read_indicator(obj, kEpistemicKeys[i], options.scale, line);
  return r;
}

std::vector<std::string> sorted_unique(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

Index position(const std::vector<std::string>& sorted, const std::string& id) {
  return std::lower_bound(sorted.begin(), sorted.end(), id) - sorted.begin();
}

std::string describe(const RecordKey& k) {
  return "(prompt=" + k.prompt_id + ", model=" + k.model_id + ", judge=" + k.judge_id + ")";
}

}  // namespace

std::vector<std::string> default_categories() {
  return {"gender", "race", "ethnicity", "disability", "age", "religion", "geographic_origin"};
}

double norm_ordinal(int x) {
  if (x < 1 || x > 10)
    throw std::out_of_range("ordinal out of range: " + std::to_string(x) + " (expected 1..10)");
  return (x - 1) / 9.0;
}

double norm_bool(bool b) { return b ? 1.0 : 0.0; }

double norm_explicitness(Explicitness t) {
  switch (t) {
    case Explicitness::kNone: return 0.0;
    case Explicitness::kImplicit: return 0.5;
    case Explicitness::kExplicit: return 1.0;
  }
  throw std::invalid_argument("unknown explicitness level");
}

Explicitness parse_explicitness(std::string_view label) {
  if (label == "none") return Explicitness::kNone;
  if (label == "implicit") return Explicitness::kImplicit;
  if (label == "explicit") return Explicitness::kExplicit;
  throw ValidationError("unknown explicitness label '" + std::string(label) + "'");
}

std::string_view explicitness_label(Explicitness t) {
  switch (t) {
    case Explicitness::kNone: return "none";
    case Explicitness::kImplicit: return "implicit";
    case Explicitness::kExplicit: return "explicit";
  }
  return "none";
}

const JudgeAssessment* Corpus::find(Index model, Index prompt, Index judge) const {
  const Index n = num_prompts();
  const Index K = num_judges();
  auto at = cells_[static_cast<std::size_t>((model * n + prompt) * K + judge)];
  return at < 0 ? nullptr : &records_[static_cast<std::size_t>(at)];
}

bool Corpus::operator==(const Corpus& other) const {
  return categories_ == other.categories_ && scale_ == other.scale_ && judges_ == other.judges_ &&
         models_ == other.models_ && prompts_ == other.prompts_ && records_ == other.records_ &&
         missing_ == other.missing_;
}

Corpus Corpus::from_records(std::vector<JudgeAssessment> records,
                            std::vector<std::string> categories, CompletenessMode mode,
                            IndicatorScale scale, std::vector<std::string> warnings) {
  if (categories.empty()) throw ValidationError("empty bias category set");

  Corpus c;
  c.categories_ = std::move(categories);
  c.scale_ = scale;
  c.mode_ = mode;
  c.warnings_ = std::move(warnings);

  std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
    return std::tie(a.model_id, a.prompt_id, a.judge_id) <
           std::tie(b.model_id, b.prompt_id, b.judge_id);
  });
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& a = records[i - 1];
    const auto& b = records[i];
    if (a.model_id == b.model_id && a.prompt_id == b.prompt_id && a.judge_id == b.judge_id)
      throw ValidationError("duplicate triple " +
                            describe({b.prompt_id, b.model_id, b.judge_id}));
  }

  std::vector<std::string> judges, models, prompts;
  for (const auto& r : records) {
    judges.push_back(r.judge_id);
    models.push_back(r.model_id);
    prompts.push_back(r.prompt_id);
  }
  c.judges_ = sorted_unique(std::move(judges));
  c.models_ = sorted_unique(std::move(models));
  c.prompts_ = sorted_unique(std::move(prompts));

  const Index n = c.num_prompts(), k = c.num_models(), K = c.num_judges();
  c.cells_.assign(static_cast<std::size_t>(n * k * K), -1);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    Index m = position(c.models_, r.model_id);
    Index q = position(c.prompts_, r.prompt_id);
    Index j = position(c.judges_, r.judge_id);
    c.cells_[static_cast<std::size_t>((m * n + q) * K + j)] = static_cast<std::ptrdiff_t>(i);
  }
  c.records_ = std::move(records);

  for (Index q = 0; q < n; ++q)
    for (Index m = 0; m < k; ++m)
      for (Index j = 0; j < K; ++j)
        if (c.cells_[static_cast<std::size_t>((m * n + q) * K + j)] < 0)
          c.missing_.push_back({c.prompts_[q], c.models_[m], c.judges_[j]});

  if (mode == CompletenessMode::strict && !c.missing_.empty())
    throw ValidationError("incomplete grid: " + std::to_string(c.missing_.size()) +
                          " missing triple(s), first missing " + describe(c.missing_.front()));
  return c;
}

Corpus parse_corpus(std::istream& in, const ParseOptions& options) {
  std::vector<JudgeAssessment> records;
  std::vector<std::string> warnings;
  std::map<RecordKey, std::size_t> seen;

  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.find_first_not_of(" \t") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ValidationError(where(line) + "malformed record: " + e.what());
    }
    auto rec = parse_record(obj, options, line, warnings);
    RecordKey key{rec.prompt_id, rec.model_id, rec.judge_id};
    auto [it, inserted] = seen.emplace(key, line);
    if (!inserted)
      throw ValidationError(where(line) + "duplicate triple " + describe(key) +
                            " (first seen on line " + std::to_string(it->second) + ")");
    records.push_back(std::move(rec));
  }
  if (records.empty()) throw ValidationError("input contains no records");
  return Corpus::from_records(std::move(records), options.categories, options.mode, options.scale,
                              std::move(warnings));
}

Corpus parse_corpus(const std::filesystem::path& path, const ParseOptions& options) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open input file '" + path.string() + "'");
  return parse_corpus(in, options);
}

void emit_corpus(const Corpus& corpus, std::ostream& out) {
  for (const auto& r : corpus.records()) {
    nlohmann::ordered_json obj;
    obj["prompt_id"] = r.prompt_id;
    obj["model_id"] = r.model_id;
    obj["judge_id"] = r.judge_id;
    nlohmann::ordered_json flags = nlohmann::ordered_json::object();
    for (const auto& [name, value] : r.bias_flags) flags[name] = value;
    obj["bias_flags"] = flags;
    obj["bias_severity"] = r.bias_severity;
    obj["bias_impact"] = r.bias_impact;
    obj["explicitness"] = std::string(explicitness_label(r.explicitness));
    obj["intersectionality"] = r.intersectionality;
    auto put = [&](const char* key, double v) {
      if (corpus.scale() == IndicatorScale::ordinal)
        obj[key] = static_cast<int>(v);
      else
        obj[key] = v;
    };
    for (std::size_t i = 0; i < kFairnessKeys.size(); ++i) put(kFairnessKeys[i], r.fairness[i]);
    for (std::size_t i = 0; i < kEthicsKeys.size(); ++i) put(kEthicsKeys[i], r.ethics[i]);
    for (std::size_t i = 0; i < kEpistemicKeys.size(); ++i) put(kEpistemicKeys[i], r.epistemic[i]);
    out << obj.dump() << '\n';
  }
}

}  // namespace sharp
