#include "trigen/pipeline.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "serialize.hpp"

#ifndef TRIGEN_VERSION
#define TRIGEN_VERSION "dev"
#endif

namespace trigen {

using nlohmann::json;
namespace fs = std::filesystem;

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const FieldSpec& JobConfig::field(const std::string& name) const {
  for (const auto& f : fields)
    if (f.name == name) return f;
  throw ConfigError("unknown field '" + name + "'");
}

// ---------------------------------------------------------------------------
// Config parsing

namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [k, v] : obj.items())
    if (!allowed.count(k)) throw ConfigError("unknown key '" + k + "' in " + where);
}

template <class F>
auto guarded(const std::string& where, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

UnitSource parse_units(const json& j, const std::string& where) {
  check_keys(j, {"mode", "height", "list"}, where);
  const std::string mode = j.value("mode", "pell");
  if (mode == "pell") return UnitSource::pell();
  if (mode == "search") return UnitSource::search(j.contains("height") ? json_io::to_long(j["height"]) : 2);
  if (mode == "configured") {
    if (!j.contains("list")) throw ConfigError(where + ": configured units need a list");
    std::vector<QVector> units;
    for (const auto& u : j["list"]) units.push_back(json_io::to_qvector(u));
    return UnitSource::configured(std::move(units));
  }
  throw ConfigError(where + ": unknown unit mode '" + mode + "'");
}

FieldSpec parse_field(const json& j) {
  check_keys(j, {"name", "poly", "integral_basis", "units", "subfield", "alpha", "x", "divisibility", "su21", "multone"},
             "field descriptor");
  if (!j.contains("name") || !j["name"].is_string()) throw ConfigError("field descriptor needs a string name");
  FieldSpec f;
  f.name = j["name"].get<std::string>();
  const std::string where = "field '" + f.name + "'";
  f.echo = j.dump();
  guarded(where, [&] {
    if (j.contains("poly")) f.poly = json_io::to_zvector(j["poly"]);
    if (j.contains("integral_basis")) {
      std::vector<QVector> rows;
      for (const auto& r : j["integral_basis"]) rows.push_back(json_io::to_qvector(r));
      f.integral_basis = QMatrix::from_rows(rows);
    }
    if (j.contains("units")) f.units = parse_units(j["units"], where + " units");
    if (j.contains("subfield")) {
      check_keys(j["subfield"], {"field", "image"}, where + " subfield");
      f.subfield = SubfieldSpec{j["subfield"].at("field").get<std::string>(), json_io::to_qvector(j["subfield"].at("image"))};
    }
    if (j.contains("alpha")) f.alpha = json_io::to_qvector(j["alpha"]);
    if (j.contains("x")) f.x = json_io::to_qvector(j["x"]);
    if (j.contains("divisibility")) f.divisibility = json_io::to_long(j["divisibility"]);
    if (j.contains("su21")) {
      const json& s = j["su21"];
      check_keys(s, {"z", "s", "t"}, where + " su21");
      if (!s.contains("z") || !s.contains("t")) throw ConfigError(where + ": su21 needs z and t");
      Su21Spec spec;
      spec.z = json_io::to_integer(s["z"]);
      if (s.contains("s")) spec.s = json_io::to_integer(s["s"]);
      spec.t = s["t"].is_array() ? json_io::to_qvector(s["t"]) : QVector{json_io::to_rational(s["t"])};
      if (spec.t.empty() || spec.t.size() > 2) throw ConfigError(where + ": su21 t must have one or two coordinates");
      f.su21 = spec;
    }
    if (j.contains("multone")) {
      const json& m = j["multone"];
      check_keys(m, {"n", "levi", "exponents", "u_col"}, where + " multone");
      MultoneSpec spec;
      spec.n = static_cast<std::size_t>(json_io::to_long(m.at("n")));
      for (const auto& r : m.at("levi")) spec.levi.push_back(json_io::to_qvector(r));
      for (const auto& e : m.at("exponents")) spec.exponents.push_back(json_io::to_long(e));
      spec.u_col = json_io::to_qvector(m.at("u_col"));
      f.multone = spec;
    }
    return 0;
  });
  return f;
}

}  // namespace

JobConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(j, {"fields", "cases", "r_values", "primes", "caps", "cache_dir"}, "config");
  JobConfig c;
  if (j.contains("fields")) {
    if (!j["fields"].is_array()) throw ConfigError("fields must be an array");
    std::set<std::string> names;
    for (const auto& f : j["fields"]) {
      c.fields.push_back(parse_field(f));
      if (!names.insert(c.fields.back().name).second) throw ConfigError("duplicate field '" + c.fields.back().name + "'");
      if (c.fields.back().poly) make_field(c.fields.back());
    }
  }
  guarded("config", [&] {
    if (j.contains("r_values")) {
      c.r_values.clear();
      for (const auto& r : j["r_values"]) c.r_values.push_back(json_io::to_long(r));
    }
    if (j.contains("primes"))
      for (const auto& p : j["primes"]) {
        const long v = json_io::to_long(p);
        if (v < 2 || mpz_probab_prime_p(Integer(v).get_mpz_t(), 30) == 0)
          throw ConfigError(std::to_string(v) + " in primes is not prime");
        c.primes.push_back(static_cast<std::uint64_t>(v));
      }
    if (j.contains("caps")) {
      const json& k = j["caps"];
      check_keys(k, {"closure_elements", "enumeration", "r_max", "commutator_height", "closure_threads", "unit_power"}, "caps");
      auto positive = [&](const char* key) {
        const long v = json_io::to_long(k[key]);
        if (v < 1) throw ConfigError(std::string("caps.") + key + " must be positive");
        return v;
      };
      if (k.contains("closure_elements")) c.caps.closure_elements = static_cast<std::size_t>(positive("closure_elements"));
      if (k.contains("enumeration")) c.caps.enumeration = static_cast<std::uint64_t>(positive("enumeration"));
      if (k.contains("r_max")) c.caps.r_max = positive("r_max");
      if (k.contains("commutator_height")) c.caps.commutator_height = positive("commutator_height");
      if (k.contains("unit_power")) c.caps.unit_power = positive("unit_power");
      if (k.contains("closure_threads")) c.caps.closure_threads = static_cast<unsigned>(positive("closure_threads"));
    }
    return 0;
  });
  if (j.contains("cache_dir")) c.cache_dir = j["cache_dir"].get<std::string>();
  for (long r : c.r_values)
    if (r < 1) throw ConfigError("r values must be positive");

  if (j.contains("cases")) {
    if (!j["cases"].is_array()) throw ConfigError("cases must be an array");
    for (const auto& e : j["cases"]) {
      CaseSpec cs;
      std::string tag;
      if (e.is_string()) {
        tag = e.get<std::string>();
      } else {
        check_keys(e, {"case", "fields"}, "case entry");
        tag = e.at("case").get<std::string>();
        if (e.contains("fields"))
          for (const auto& n : e["fields"]) cs.fields.push_back(n.get<std::string>());
      }
      try {
        cs.tag = parse_case_tag(tag);
      } catch (const std::invalid_argument& ex) {
        throw ConfigError(ex.what());
      }
      if (cs.fields.empty())
        for (const auto& f : c.fields) cs.fields.push_back(f.name);
      for (const auto& name : cs.fields) {
        const FieldSpec& f = c.field(name);
        const std::string where = to_string(cs.tag) + " on field '" + name + "'";
        switch (cs.tag) {
          case CaseTag::SL2_NONCM:
            if (!f.poly) throw ConfigError(where + " needs a defining polynomial");
            break;
          case CaseTag::SL2_CM:
          case CaseTag::SL2_CMPRIME:
            if (!f.poly) throw ConfigError(where + " needs a defining polynomial");
            if (!f.subfield) throw ConfigError(where + " needs a declared subfield");
            if (!c.field(f.subfield->field).poly) throw ConfigError(where + ": subfield has no defining polynomial");
            if (cs.tag == CaseTag::SL2_CM && !f.alpha) throw ConfigError(where + " needs alpha");
            if (cs.tag == CaseTag::SL2_CMPRIME && !f.x) throw ConfigError(where + " needs x");
            break;
          case CaseTag::SU21:
            if (!f.su21) throw ConfigError(where + " needs su21 parameters z and t");
            break;
          case CaseTag::SLN_MULTONE:
            if (!f.multone) throw ConfigError(where + " needs multone parameters");
            break;
        }
      }
      c.cases.push_back(std::move(cs));
    }
  }
  return c;
}

JobConfig load_config(const std::string& path) { return parse_config(read_file(path)); }

FieldPtr make_field(const FieldSpec& spec) {
  if (!spec.poly) {
    if (spec.multone || spec.su21) return rational_field();
    throw ConfigError("field '" + spec.name + "' has no defining polynomial");
  }
  try {
    return NumberField::create(*spec.poly, spec.integral_basis, spec.name);
  } catch (const DomainError& e) {
    throw ConfigError("field '" + spec.name + "': " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError("field '" + spec.name + "': " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Cache

namespace {

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

const std::string kCacheSalt = std::string("trigen-cache/1/") + TRIGEN_VERSION;

class FileLock {
 public:
  FileLock(const fs::path& path, bool exclusive) {
    fd_ = ::open(path.c_str(), O_RDWR | O_CREAT, 0644);
    if (fd_ >= 0) ::flock(fd_, exclusive ? LOCK_EX : LOCK_SH);
  }
  ~FileLock() {
    if (fd_ >= 0) {
      ::flock(fd_, LOCK_UN);
      ::close(fd_);
    }
  }
  FileLock(const FileLock&) = delete;
  FileLock& operator=(const FileLock&) = delete;

 private:
  int fd_ = -1;
};

/// Memoising key-value store backed by one JSON file per key. Entries carry
/// the version salt and a checksum of the payload; anything that fails to
/// validate is treated as a miss and rewritten.
class Cache {
 public:
  explicit Cache(std::optional<std::string> dir) {
    if (dir) {
      std::error_code ec;
      fs::create_directories(*dir, ec);
      if (ec) throw ConfigError("cannot create cache directory '" + *dir + "': " + ec.message());
      dir_ = fs::path(*dir);
    }
  }

  template <class Compute>
  json get_or_compute(const std::string& key, Compute&& compute) {
    {
      std::lock_guard<std::mutex> g(mu_);
      auto it = memo_.find(key);
      if (it != memo_.end()) {
        ++hits_;
        return it->second;
      }
    }
    if (auto hit = load(key)) {
      std::lock_guard<std::mutex> g(mu_);
      ++hits_;
      memo_.emplace(key, *hit);
      return *hit;
    }
    json value = compute();
    store(key, value);
    std::lock_guard<std::mutex> g(mu_);
    ++misses_;
    memo_.emplace(key, value);
    return value;
  }

  std::size_t hits() const { return hits_; }
  std::size_t misses() const { return misses_; }
  std::optional<std::string> dir() const { return dir_ ? std::optional<std::string>(dir_->string()) : std::nullopt; }

 private:
  fs::path entry_path(const std::string& key, const char* ext) const {
    return *dir_ / (hex64(fnv1a(kCacheSalt + "\n" + key)) + ext);
  }

  std::optional<json> load(const std::string& key) const {
    if (!dir_) return std::nullopt;
    const fs::path path = entry_path(key, ".json");
    FileLock lock(entry_path(key, ".lock"), false);
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
      const json j = json::parse(ss.str());
      if (j.at("salt") != kCacheSalt || j.at("key") != key) return std::nullopt;
      const json& payload = j.at("payload");
      if (j.at("checksum").get<std::string>() != hex64(fnv1a(payload.dump()))) return std::nullopt;
      return payload;
    } catch (const json::exception&) {
      return std::nullopt;
    }
  }

  void store(const std::string& key, const json& value) const {
    if (!dir_) return;
    const fs::path path = entry_path(key, ".json");
    FileLock lock(entry_path(key, ".lock"), true);
    const json j = {{"salt", kCacheSalt}, {"key", key}, {"checksum", hex64(fnv1a(value.dump()))}, {"payload", value}};
    const fs::path tmp = path.string() + ".tmp" + std::to_string(::getpid());
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << j.dump();
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
  }

  std::optional<fs::path> dir_;
  std::mutex mu_;
  std::map<std::string, json> memo_;
  std::atomic<std::size_t> hits_{0}, misses_{0};
};

std::string unit_source_key(const UnitSource& u) {
  std::string s;
  switch (u.mode) {
    case UnitSource::Mode::Pell: s = "pell"; break;
    case UnitSource::Mode::Search: s = "search:" + std::to_string(u.height_bound); break;
    case UnitSource::Mode::Configured:
      s = "configured:";
      for (const auto& v : u.units) {
        for (const auto& q : v) s += to_string(q) + ",";
        s += ";";
      }
      break;
  }
  return s;
}

// ---------------------------------------------------------------------------
// Jobs

struct Job {
  CaseTag tag;
  const FieldSpec* spec;
  long r;
};

class Context {
 public:
  Context(const JobConfig& cfg, Cache& cache) : cfg_(cfg), cache_(cache) {
    for (const auto& f : cfg.fields) fields_.emplace(f.name, make_field(f));
  }

  const JobConfig& config() const { return cfg_; }
  FieldPtr field(const std::string& name) const { return fields_.at(name); }

  UnitSource units_for(const FieldSpec& spec, const FieldPtr& k) const {
    if (spec.units) return *spec.units;
    if (k->degree() == 2 && k->signature().r1 == 2) return UnitSource::pell();
    return UnitSource::search(2);
  }

  ThetaCertificate theta(const FieldSpec& spec) {
    const FieldPtr k = field(spec.name);
    if (k->degree() == 1) throw DomainError("K = Q has unit rank 0");
    if (unit_rank(*k) == 0) throw DomainError("unit rank 0");
    const UnitSource src = units_for(spec, k);
    const std::string key =
        "theta|" + k->canonical_key() + "|" + unit_source_key(src) + "|" + std::to_string(cfg_.caps.r_max);
    const json j = cache_.get_or_compute(key, [&] { return json_io::theta(select_theta(*k, src, cfg_.caps.r_max)); });
    return json_io::theta_from(j, k);
  }

  AmbientOrder ambient(const ResidueRing& ring, std::size_t n) {
    const std::string key = "ambient|" + ring.field()->canonical_key() + "|" + std::to_string(ring.p()) + "|" +
                            std::to_string(n) + "|" + std::to_string(cfg_.caps.enumeration);
    const json j = cache_.get_or_compute(key, [&] {
      const AmbientOrder a = ambient_order(ring, n, cfg_.caps.enumeration);
      return json{{"order", json_io::integer(a.order)},
                  {"method", a.method == AmbientOrder::Method::Enumeration ? "enumeration" : "factorization"}};
    });
    return {json_io::to_integer(j.at("order")), j.at("method") == "enumeration" ? AmbientOrder::Method::Enumeration
                                                                                 : AmbientOrder::Method::Factorization};
  }

  CertifyOptions certify_options() {
    CertifyOptions o;
    o.closure.max_elements = cfg_.caps.closure_elements;
    o.closure.enumeration_cap = cfg_.caps.enumeration;
    o.closure.threads = cfg_.caps.closure_threads;
    o.ambient_provider = [this](const ResidueRing& ring, std::size_t n) { return ambient(ring, n); };
    return o;
  }

 private:
  const JobConfig& cfg_;
  Cache& cache_;
  std::map<std::string, FieldPtr> fields_;
};

json bruhat_json(const BruhatFactors& b) {
  return {{"u1", json_io::matrix(b.u1)},
          {"torus", json_io::matrix(b.torus)},
          {"weyl", json_io::matrix(b.weyl)},
          {"u2", json_io::matrix(b.u2)},
          {"is_borel", b.is_borel},
          {"convention", b.convention == WeylConvention::NegUpper ? "neg_upper" : "pos_upper"},
          {"display", b.u1.to_string() + " " + b.torus.to_string() + " " + b.weyl.to_string() + " " + b.u2.to_string()}};
}

void attach_certificate(json& out, const Certificate& c) {
  json primes = json::array();
  for (const auto& p : c.primes) primes.push_back(json_io::prime(p));
  out["primes"] = primes;
  out["words_ok"] = c.words_ok;
  out["verdict"] = to_string(c.verdict);
  if (!c.failing_component.empty()) out["failing_component"] = c.failing_component;
}

void fail_extra(json& out, const std::string& component) {
  out["verdict"] = to_string(Verdict::Fail);
  const std::string prev = out.value("failing_component", "");
  out["failing_component"] = prev.empty() ? component : prev + "; " + component;
}

SubfieldEmbedding embedding_for(Context& ctx, const FieldSpec& spec) {
  const FieldPtr e = ctx.field(spec.name);
  const FieldPtr f = ctx.field(spec.subfield->field);
  return SubfieldEmbedding(f, e, e->from_power_coords(spec.subfield->image));
}

MatN upper_over(const FieldPtr& f, long r) { return MatN::elementary(f, 2, 0, 1, f->from_rational(r)); }

json run_job(const Job& job, Context& ctx) {
  const FieldSpec& spec = *job.spec;
  const auto& primes = ctx.config().primes;
  json out = {{"field", spec.name}, {"case", to_string(job.tag)}, {"r", job.r}, {"inputs", json::parse(spec.echo)}};
  try {
    switch (job.tag) {
      case CaseTag::SL2_NONCM: {
        const FieldPtr k = ctx.field(spec.name);
        const ThetaCertificate tc = ctx.theta(spec);
        out["theta_certificate"] = json_io::theta(tc);
        const GeneratorTriple t = build_noncm(k, tc, job.r);
        out["triple"] = json_io::triple(t);
        const ElementaryCertificate ec = elementary_words(tc.theta, t.get("U+"), job.r, integral_basis_elements(k));
        const Certificate c = certify(t, primes, ec, tc, ctx.certify_options());
        out["elementary"] = json_io::elementary(ec, c.word_checks);
        attach_certificate(out, c);
        break;
      }
      case CaseTag::SL2_CM:
      case CaseTag::SL2_CMPRIME: {
        const SubfieldEmbedding emb = embedding_for(ctx, spec);
        const FieldPtr e = emb.field();
        const FieldPtr f = emb.subfield();
        if (!is_cm_field(*e, *f, emb.image())) throw DomainError("field is not a CM extension of the declared subfield");
        const ThetaCertificate tc = ctx.theta(ctx.config().field(spec.subfield->field));
        out["theta_certificate"] = json_io::theta(tc);
        json extra;
        GeneratorTriple t;
        FieldElement theta = tc.theta;
        bool extra_ok = true;
        if (job.tag == CaseTag::SL2_CM) {
          const FieldElement alpha = e->from_power_coords(*spec.alpha);
          t = build_cm(emb, alpha, tc, job.r);
          const BruhatFactors bf = bruhat_decompose(t.get("U-"), WeylConvention::PosUpper);
          extra = {{"alpha", json_io::element(alpha)},
                   {"alpha_squared", json_io::element(alpha * alpha)},
                   {"u_minus_bruhat", bruhat_json(bf)},
                   {"bruhat_recomposes", bf.recompose() == t.get("U-")}};
          extra_ok = bf.recompose() == t.get("U-");
        } else {
          const FieldElement x = e->from_power_coords(*spec.x);
          const auto [tr, nm] = relative_trace_norm(emb, x);
          if (tr.is_zero()) throw DomainError("relative trace t = 0; this case is the CM construction (use SL2_CM)");
          theta = congruent_unit_power(tc.theta, tr, ctx.config().caps.unit_power);
          const CmPrimeElement g = cmprime_g_element(emb, x, theta, spec.divisibility);
          const BruhatFactors bf = bruhat_decompose(g.g);
          const bool recomposes = bf.recompose() == g.g;
          extra = {{"x", json_io::element(x)},
                   {"t", json_io::element(g.t)},
                   {"n", json_io::element(g.n)},
                   {"theta", json_io::element(theta)},
                   {"theta_display", theta.to_string()},
                   {"g", json_io::matrix(g.g)},
                   {"formula_a", g.formula_a},
                   {"formula_c", g.formula_c},
                   {"a_outside_F", g.a_outside_f},
                   {"c_in_F", g.c_in_f},
                   {"bruhat", bruhat_json(bf)},
                   {"bruhat_recomposes", recomposes}};
          extra_ok = g.formula_a && g.formula_c && g.a_outside_f && g.c_in_f && recomposes;
          t = build_cmprime(emb, x, theta, job.r);
        }
        out["case_data"] = extra;
        out["triple"] = json_io::triple(t);
        const ElementaryCertificate ec = elementary_words(theta, upper_over(f, job.r), job.r, integral_basis_elements(f));
        const Certificate c = certify(t, primes, ec, tc, ctx.certify_options());
        out["elementary"] = json_io::elementary(ec, c.word_checks);
        attach_certificate(out, c);
        if (!extra_ok) fail_extra(out, "case identities");
        break;
      }
      case CaseTag::SU21: {
        const Su21Spec& s = *spec.su21;
        const Su21Setting setting = make_su21_setting(s.z, s.s);
        FieldElement t = setting.field->from_rational(s.t[0]);
        if (s.t.size() == 2) t = setting.in_f(s.t[0], s.t[1]);
        const Su21Build b = build_su21(setting, t, job.r, ctx.config().caps.commutator_height);
        out["triple"] = json_io::triple(b.triple);
        json checks = json::object();
        bool ok = b.report.commutators_failed == 0;
        for (const auto& [name, pass] : b.report.generator_checks) {
          checks[name] = pass;
          ok = ok && pass;
        }
        out["case_data"] = {{"field", setting.field->name()},
                            {"sqrt_z", json_io::element(setting.sqrt_z)},
                            {"t", json_io::element(t)},
                            {"generator_checks", checks},
                            {"commutator_height", b.report.commutator_height},
                            {"commutators_checked", b.report.commutators_checked},
                            {"commutators_failed", b.report.commutators_failed}};
        attach_certificate(out, certify(b.triple, primes, std::nullopt, std::nullopt, ctx.certify_options()));
        if (!ok) fail_extra(out, "SU(2,1) identities");
        break;
      }
      case CaseTag::SLN_MULTONE: {
        const MultoneSpec& m = *spec.multone;
        const FieldPtr k = ctx.field(spec.name);
        const MatN levi = MatN::from_rationals(k, m.levi);
        std::vector<FieldElement> col;
        for (const auto& q : m.u_col) col.push_back(k->from_rational(q));
        const MultoneResult res = build_sln_multone(m.n, levi, m.exponents, col, job.r);
        out["triple"] = json_io::triple(res.triple);
        out["case_data"] = {{"exponents", res.wedge.exponents},
                            {"wedge_det_upper", json_io::element(res.wedge.det_upper)},
                            {"wedge_det_lower", json_io::element(res.wedge.det_lower)}};
        attach_certificate(out, certify(res.triple, primes, std::nullopt, std::nullopt, ctx.certify_options()));
        break;
      }
    }
    out["status"] = "ok";
  } catch (const CapExceeded& e) {
    out["status"] = "aborted";
    out["error"] = e.what();
    out["verdict"] = to_string(Verdict::Fail);
    out["failing_component"] = "resource cap";
  } catch (const std::exception& e) {
    out["status"] = "error";
    out["error"] = e.what();
    out["verdict"] = to_string(Verdict::Fail);
    out["failing_component"] = "pipeline";
  }
  return out;
}

std::optional<std::string> resolve_cache_dir(const JobConfig& cfg, const RunOptions& opt) {
  if (opt.cache_dir) return opt.cache_dir;
  if (opt.use_environment)
    if (const char* env = std::getenv(kCacheEnv); env && *env) return std::string(env);
  return cfg.cache_dir;
}

}  // namespace

RunOutcome run(const JobConfig& config, const RunOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  Cache cache(resolve_cache_dir(config, options));
  Context ctx(config, cache);

  std::vector<Job> jobs;
  for (const auto& cs : config.cases)
    for (const auto& name : cs.fields)
      for (long r : config.r_values) jobs.push_back({cs.tag, &config.field(name), r});

  std::vector<json> results(jobs.size());
  std::vector<double> job_ms(jobs.size(), 0.0);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const auto s = std::chrono::steady_clock::now();
      results[i] = run_job(jobs[i], ctx);
      job_ms[i] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - s).count();
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(std::max<std::size_t>(1, jobs.size()))));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  RunOutcome outcome;
  outcome.jobs = jobs.size();
  json report;
  report["trigen_version"] = TRIGEN_VERSION;
  json caps = {{"closure_elements", config.caps.closure_elements},
               {"enumeration", std::to_string(config.caps.enumeration)},
               {"r_max", config.caps.r_max},
               {"commutator_height", config.caps.commutator_height},
               {"unit_power", config.caps.unit_power}};
  json primes = json::array();
  for (auto p : config.primes) primes.push_back(std::to_string(p));
  report["config"] = {{"r_values", config.r_values}, {"primes", primes}, {"caps", caps}};
  report["jobs"] = json::array();
  for (auto& j : results) {
    if (j.value("status", "") == "aborted") outcome.exit_code = kExitResource;
    report["jobs"].push_back(std::move(j));
  }
  outcome.cache_hits = cache.hits();
  outcome.cache_misses = cache.misses();
  const auto dir = cache.dir();
  report["runtime"] = {
      {"total_ms", std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count()},
      {"job_ms", job_ms},
      {"workers", workers},
      {"cache", {{"dir", dir ? json(*dir) : json(nullptr)}, {"hits", outcome.cache_hits}, {"misses", outcome.cache_misses}}}};
  outcome.report = report.dump(2) + "\n";
  return outcome;
}

std::string deterministic_part(const std::string& report_json) {
  json j = json::parse(report_json);
  j.erase("runtime");
  return j.dump(2);
}

// ---------------------------------------------------------------------------

namespace {

std::size_t display_width(const std::string& s) {
  std::size_t w = 0;
  for (unsigned char c : s)
    if ((c & 0xC0) != 0x80) ++w;
  return w;
}

std::string pad(const std::string& s, std::size_t width) {
  const std::size_t w = display_width(s);
  return s + std::string(width > w ? width - w : 0, ' ');
}

}  // namespace

std::string explain(const std::string& report_json) {
  json j;
  try {
    j = json::parse(report_json);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("report is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("jobs") || !j["jobs"].is_array()) throw ConfigError("report has no jobs array");

  std::vector<std::vector<std::string>> rows{{"field", "case", "r", "N", "primes", "verdict"}};
  try {
    for (const auto& job : j["jobs"]) {
      std::string n = "-";
      if (job.contains("elementary")) n = job["elementary"].at("N").get<std::string>();
      std::string primes = "-";
      if (job.contains("primes")) {
        std::size_t total = 0, surj = 0, rejected = 0;
        bool unknown = false;
        for (const auto& p : job["primes"]) {
          const std::string status = p.at("status");
          if (status == "skipped") continue;
          if (status == "rejected") {
            ++rejected;
            continue;
          }
          ++total;
          const std::string s = p.at("closure").at("surjective");
          if (s == "yes") ++surj;
          if (s == "unknown") unknown = true;
        }
        if (unknown)
          primes = "UNKNOWN (cap)";
        else if (total > 0)
          primes = std::to_string(surj) + "/" + std::to_string(total) + (surj == total ? " ✓" : " ✗");
        if (rejected > 0) primes += (primes == "-" ? "" : " ") + std::string("+") + std::to_string(rejected) + " rejected";
      }
      std::string verdict = job.at("verdict");
      if (job.contains("error")) verdict += " (" + job["error"].get<std::string>() + ")";
      rows.push_back({job.at("field"), job.at("case"), std::to_string(job.at("r").get<long>()), n, primes, verdict});
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed report: ") + e.what());
  }
  std::vector<std::size_t> width(rows.front().size(), 0);
  for (const auto& r : rows)
    for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], display_width(r[c]));
  std::ostringstream os;
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < r.size(); ++c) os << (c + 1 == r.size() ? r[c] : pad(r[c], width[c] + 2));
    os << "\n";
  }
  return os.str();
}

std::string field_info(const JobConfig& config, const std::string& field_name) {
  const FieldSpec& spec = config.field(field_name);
  const FieldPtr k = make_field(spec);
  std::ostringstream os;
  os << "field:          " << spec.name << "\n";
  os << "polynomial:     " << k->modulus().to_string() << "\n";
  os << "degree:         " << k->degree() << "\n";
  os << "signature:      (" << k->signature().r1 << ", " << k->signature().r2 << ")\n";
  os << "unit rank:      " << unit_rank(*k) << "\n";
  os << "discriminant:   " << k->discriminant() << "\n";
  os << "basis index:    " << k->basis_index() << "\n";
  os << "irreducibility: " << (k->irreducibility() == Irreducibility::Proven ? "proven" : "trusted") << "\n";
  Cache cache(std::nullopt);
  Context ctx(config, cache);
  try {
    const ThetaCertificate tc = ctx.theta(spec);
    os << "theta:          " << tc.theta.to_string() << "\n";
    os << "indices:       ";
    for (const auto& [r, idx] : tc.indices) os << " r=" << r << ":" << idx;
    os << "\n";
  } catch (const std::exception& e) {
    os << "theta:          unavailable (" << e.what() << ")\n";
  }
  return os.str();
}

}  // namespace trigen
