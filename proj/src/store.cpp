#include "winprob/store.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "winprob/csv.hpp"

namespace winprob {

namespace {

constexpr const char* kSurfaceHeader = "t,lead,prob,missing";
constexpr const char* kProbitHeader = "param,value";

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArtifactError("cannot open artifact " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ArtifactError("cannot write " + path);
  out << text;
  out.flush();
  if (!out) throw ArtifactError("error writing " + path);
}

const char* flag(bool b) { return b ? "true" : "false"; }

// Splits text into lines, remembering each line's byte offset.
class LineCursor {
 public:
  LineCursor(const std::string& text, std::string source) : text_(text), source_(std::move(source)) {}

  bool next(std::string_view& line) {
    if (pos_ >= text_.size()) return false;
    offset_ = pos_;
    const auto nl = text_.find('\n', pos_);
    if (nl == std::string::npos) fail("truncated record (no newline)");
    line = std::string_view(text_).substr(pos_, nl - pos_);
    pos_ = nl + 1;
    return true;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(source_, 0, "byte " + std::to_string(offset_) + ": " + what);
  }
  std::size_t offset() const { return offset_; }
  std::size_t end() const { return text_.size(); }

 private:
  const std::string& text_;
  std::string source_;
  std::size_t pos_ = 0;
  std::size_t offset_ = 0;
};

std::map<std::string, std::string> parse_meta(const std::string& path) {
  const std::string text = read_file(path);
  if (text.empty()) throw EmptyArtifactError("empty artifact metadata " + path);
  std::map<std::string, std::string> kv;
  LineCursor cur(text, path);
  std::string_view line;
  while (cur.next(line)) {
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) cur.fail("expected key=value");
    kv.emplace(std::string(line.substr(0, eq)), std::string(line.substr(eq + 1)));
  }
  return kv;
}

const std::string& need(const std::map<std::string, std::string>& kv, const std::string& key,
                        const std::string& path) {
  auto it = kv.find(key);
  if (it == kv.end()) throw ArtifactError(path + ": metadata lacks '" + key + "'");
  return it->second;
}

template <typename T, typename Fn>
T convert(const std::string& path, const std::string& key, const std::string& value, Fn&& fn) {
  try {
    return static_cast<T>(fn(value));
  } catch (const std::invalid_argument& e) {
    throw ArtifactError(path + ": metadata '" + key + "': " + e.what());
  }
}

}  // namespace

std::string config_hash(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ArtifactBundle make_bundle(const FittedModel& model, std::string_view config_text) {
  ArtifactBundle b;
  b.method = model.method;
  b.provenance = model.provenance;
  b.config_hash = config_hash(config_text);
  if (model.method == Method::Probit) {
    if (!model.probit) throw std::invalid_argument("probit model without parameters");
    b.payload = *model.probit;
  } else {
    if (!model.surface) throw std::invalid_argument("model has no surface");
    b.payload = *model.surface;
  }
  return b;
}

FittedModel to_model(const ArtifactBundle& bundle) {
  FittedModel m;
  m.method = bundle.method;
  m.provenance = bundle.provenance;
  if (const auto* p = std::get_if<ProbitParams>(&bundle.payload)) {
    m.probit = *p;
  } else {
    m.surface = std::get<Surface>(bundle.payload);
  }
  return m;
}

std::string meta_path(const std::string& path) { return path + ".meta"; }

void save(const ArtifactBundle& bundle, const std::string& path) {
  const auto& pv = bundle.provenance;
  std::ostringstream meta;
  meta << "format_version=" << bundle.format_version << '\n'
       << "method=" << to_string(bundle.method) << '\n';
  std::ostringstream body;
  if (const auto* p = std::get_if<ProbitParams>(&bundle.payload)) {
    meta << "payload=probit\n";
    body << kProbitHeader << '\n'
         << "mu," << csv::format_double(p->mu) << '\n'
         << "sigma," << csv::format_double(p->sigma) << '\n'
         << "continuity_correction," << (p->continuity_correction ? 1 : 0) << '\n';
  } else {
    const auto& s = std::get<Surface>(bundle.payload);
    meta << "payload=surface\n"
         << "t_max=" << s.t_max() << '\n'
         << "lead_bound=" << s.lead_bound() << '\n'
         << "surface_method=" << to_string(s.method()) << '\n';
    body << kSurfaceHeader << '\n';
    for (int t = 0; t < s.t_max(); ++t) {
      for (int l = -s.lead_bound(); l <= s.lead_bound(); ++l) {
        const auto p = s.at(t, l);
        body << t << ',' << l << ',' << csv::format_double(p.value_or(0.0)) << ','
             << (p ? 0 : 1) << '\n';
      }
    }
  }
  meta << "game_count=" << pv.game_count << '\n'
       << "prior=" << pv.prior << '\n'
       << "windowed=" << flag(pv.windowed) << '\n'
       << "filled=" << flag(pv.filled) << '\n';
  if (pv.probit) {
    meta << "mu=" << csv::format_double(pv.probit->mu) << '\n'
         << "sigma=" << csv::format_double(pv.probit->sigma) << '\n'
         << "continuity_correction=" << flag(pv.probit->continuity_correction) << '\n';
  }
  meta << "config_hash=" << bundle.config_hash << '\n';
  write_file(path, body.str());
  write_file(meta_path(path), meta.str());
}

ArtifactBundle load(const std::string& path) {
  const auto mpath = meta_path(path);
  const auto kv = parse_meta(mpath);
  ArtifactBundle b;
  b.format_version = convert<int>(mpath, "format_version", need(kv, "format_version", mpath),
                                  [](const std::string& v) { return csv::to_int(v); });
  if (b.format_version != kArtifactFormatVersion)
    throw VersionError(mpath + ": unsupported artifact format_version " +
                       std::to_string(b.format_version) + " (expected " +
                       std::to_string(kArtifactFormatVersion) + ")");
  const auto method = parse_method(need(kv, "method", mpath));
  if (!method) throw ArtifactError(mpath + ": unknown method '" + kv.at("method") + "'");
  b.method = *method;
  b.config_hash = need(kv, "config_hash", mpath);
  auto boolean = [&](const std::string& key) {
    return convert<bool>(mpath, key, need(kv, key, mpath),
                         [](const std::string& v) { return csv::to_bool(v); });
  };
  auto real = [&](const std::string& key) {
    return convert<double>(mpath, key, need(kv, key, mpath),
                           [](const std::string& v) { return csv::to_double(v); });
  };
  b.provenance.game_count = convert<std::int64_t>(
      mpath, "game_count", need(kv, "game_count", mpath),
      [](const std::string& v) { return csv::to_int(v); });
  b.provenance.prior = need(kv, "prior", mpath);
  b.provenance.windowed = boolean("windowed");
  b.provenance.filled = boolean("filled");
  if (kv.count("mu"))
    b.provenance.probit = ProbitParams{real("mu"), real("sigma"), boolean("continuity_correction")};

  const std::string text = read_file(path);
  if (text.empty()) throw EmptyArtifactError("empty artifact " + path);
  LineCursor cur(text, path);
  std::string_view line;
  const auto& kind = need(kv, "payload", mpath);

  if (kind == "probit") {
    if (b.method != Method::Probit) throw ArtifactError(mpath + ": probit payload for non-probit method");
    if (!cur.next(line) || line != kProbitHeader) cur.fail("expected header 'param,value'");
    std::map<std::string, std::string> params;
    while (cur.next(line)) {
      const auto f = csv::split_record(line);
      if (f.size() != 2) cur.fail("expected param,value");
      params[f[0]] = f[1];
    }
    ProbitParams p;
    try {
      p.mu = csv::to_double(params.at("mu"));
      p.sigma = csv::to_double(params.at("sigma"));
      p.continuity_correction = csv::to_int(params.at("continuity_correction")) != 0;
    } catch (const std::exception& e) {
      cur.fail(std::string("bad probit payload: ") + e.what());
    }
    if (!(p.sigma > 0)) throw ValidationError(path + ": probit sigma must be positive");
    b.payload = p;
    return b;
  }
  if (kind != "surface") throw ArtifactError(mpath + ": unknown payload kind '" + kind + "'");

  const int t_max = convert<int>(mpath, "t_max", need(kv, "t_max", mpath),
                                 [](const std::string& v) { return csv::to_int(v); });
  const int bound = convert<int>(mpath, "lead_bound", need(kv, "lead_bound", mpath),
                                 [](const std::string& v) { return csv::to_int(v); });
  const auto smethod = parse_method(need(kv, "surface_method", mpath));
  if (!smethod || t_max <= 0 || bound < 0) throw ArtifactError(mpath + ": bad surface metadata");
  Surface s(*smethod, t_max, bound);
  if (!cur.next(line) || line != kSurfaceHeader) cur.fail("expected header 't,lead,prob,missing'");
  for (int t = 0; t < t_max; ++t) {
    for (int l = -bound; l <= bound; ++l) {
      if (!cur.next(line))
        throw ParseError(path, 0, "byte " + std::to_string(cur.end()) +
                                      ": truncated, expected cell (" + std::to_string(t) + ", " +
                                      std::to_string(l) + ")");
      const auto f = csv::split_record(line);
      if (f.size() != 4) cur.fail("expected t,lead,prob,missing");
      double p = 0;
      std::int64_t ft = 0, fl = 0, miss = 0;
      try {
        ft = csv::to_int(f[0]);
        fl = csv::to_int(f[1]);
        p = csv::to_double(f[2]);
        miss = csv::to_int(f[3]);
      } catch (const std::invalid_argument& e) {
        cur.fail(e.what());
      }
      if (ft != t || fl != l)
        cur.fail("expected cell (" + std::to_string(t) + ", " + std::to_string(l) + ")");
      if (miss != 0 && miss != 1) cur.fail("missing flag must be 0 or 1");
      if (!(p >= 0.0 && p <= 1.0))
        throw ValidationError(path + ": byte " + std::to_string(cur.offset()) + ": probability " +
                              std::string(f[2]) + " outside [0,1]");
      if (miss == 0) s.set(t, l, p);
    }
  }
  if (cur.next(line)) cur.fail("unexpected trailing data");
  s.provenance() = b.provenance;
  b.payload = std::move(s);
  return b;
}

}  // namespace winprob
