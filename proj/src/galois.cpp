#include "chebeatty/galois.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "chebeatty/error.hpp"
#include "chebeatty/primes.hpp"

#ifndef CHEBEATTY_DATA_DIR
#define CHEBEATTY_DATA_DIR "data"
#endif

namespace chebeatty::galois {
namespace {

using nlohmann::json;

constexpr const char* kS3Context = R"ctx({
  "schema_version": 1,
  "name": "s3_x3m2",
  "polynomial": [-2, 0, 0, 1],
  "group_order": 6,
  "disc_L": -34992,
  "f_ab": 3,
  "classes": [
    {"label": "e", "size": 1, "d": 6, "patterns": [[1, 1, 1]]},
    {"label": "(12)", "size": 3, "d": 3, "patterns": [[1, 2]]},
    {"label": "(123)", "size": 2, "d": 2, "patterns": [[3]]}
  ]
})ctx";

[[noreturn]] void bad(const std::string& origin, const std::string& what) {
  raise(ErrorCode::InvalidContext, origin + ": " + what);
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& origin, const std::string& where) {
  if (!obj.is_object()) bad(origin, where + " must be an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed) ok = ok || it.key() == k;
    if (!ok) bad(origin, "unknown key '" + it.key() + "' in " + where);
  }
  for (const char* k : allowed) {
    if (!obj.contains(k)) bad(origin, "missing key '" + std::string(k) + "' in " + where);
  }
}

mpz_class json_integer(const json& v, const std::string& origin, const std::string& what) {
  if (v.is_number_integer()) {
    return v.is_number_unsigned() ? mpz_class(std::to_string(v.get<std::uint64_t>()))
                                  : mpz_class(std::to_string(v.get<std::int64_t>()));
  }
  if (v.is_string()) {
    mpz_class z;
    if (z.set_str(v.get<std::string>(), 10) == 0) return z;
  }
  bad(origin, what + " must be an integer");
}

std::uint64_t json_positive(const json& v, const std::string& origin, const std::string& what) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 1) bad(origin, what + " must be >= 1");
  return v.get<std::uint64_t>();
}

}  // namespace

std::vector<std::uint64_t> prime_divisors(const mpz_class& n_in) {
  mpz_class n = abs(n_in);
  std::vector<std::uint64_t> out;
  if (n == 0) raise(ErrorCode::InvalidArgument, "prime_divisors of 0");
  constexpr unsigned long kTrial = 1'000'000;
  for (unsigned long p = 2; p <= kTrial && n > 1; p += (p == 2 ? 1 : 2)) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      out.push_back(p);
      while (mpz_divisible_ui_p(n.get_mpz_t(), p)) mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
    }
  }
  if (n > 1) {
    if (mpz_sizeinbase(n.get_mpz_t(), 2) < 63 && primes::is_prime(n.get_ui())) {
      out.push_back(n.get_ui());
    } else if (n < mpz_class(kTrial) * kTrial) {
      out.push_back(n.get_ui());
    } else {
      raise(ErrorCode::InvalidContext, "cannot factor cofactor " + n.get_str());
    }
  }
  return out;
}

GaloisContext GaloisContext::parse(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    bad(origin, std::string("malformed JSON: ") + e.what());
  }
  check_keys(j, {"schema_version", "name", "polynomial", "group_order", "disc_L", "f_ab", "classes"},
             origin, "context");
  if (!j["schema_version"].is_number_integer() || j["schema_version"].get<int>() != kSchemaVersion) {
    bad(origin, "schema_version must be " + std::to_string(kSchemaVersion));
  }
  GaloisContext ctx;
  if (!j["name"].is_string()) bad(origin, "name must be a string");
  ctx.name_ = j["name"].get<std::string>();
  if (!j["polynomial"].is_array()) bad(origin, "polynomial must be an array");
  for (const auto& c : j["polynomial"]) ctx.poly_.push_back(json_integer(c, origin, "coefficient"));
  ctx.group_order_ = json_positive(j["group_order"], origin, "group_order");
  ctx.disc_L_ = json_integer(j["disc_L"], origin, "disc_L");
  ctx.f_ab_ = json_positive(j["f_ab"], origin, "f_ab");
  if (!j["classes"].is_array() || j["classes"].empty()) bad(origin, "classes must be a nonempty array");
  for (const auto& c : j["classes"]) {
    check_keys(c, {"label", "size", "d", "patterns"}, origin, "class");
    ConjugacyClass cc;
    if (!c["label"].is_string()) bad(origin, "class label must be a string");
    cc.label = c["label"].get<std::string>();
    cc.size = json_positive(c["size"], origin, "class size");
    cc.d = static_cast<unsigned>(json_positive(c["d"], origin, "class d"));
    if (!c["patterns"].is_array() || c["patterns"].empty()) {
      bad(origin, "class " + cc.label + " needs at least one pattern");
    }
    for (const auto& pat : c["patterns"]) {
      if (!pat.is_array() || pat.empty()) bad(origin, "pattern must be a nonempty array");
      std::vector<unsigned> v;
      for (const auto& d : pat) v.push_back(static_cast<unsigned>(json_positive(d, origin, "pattern entry")));
      std::sort(v.begin(), v.end());
      cc.patterns.push_back(v);
    }
    ctx.classes_.push_back(cc);
  }
  ctx.validate();
  return ctx;
}

void GaloisContext::validate() {
  const std::string& origin = name_;
  const int n = degree(poly_);
  if (n < 1) bad(origin, "polynomial must have degree >= 1");
  if (poly_.back() != 1) bad(origin, "polynomial must be monic with no trailing zeros");
  disc_f_ = discriminant(poly_);
  if (sgn(disc_f_) == 0) bad(origin, "polynomial is not squarefree");
  if (sgn(disc_L_) == 0) bad(origin, "disc_L must be nonzero");
  std::uint64_t total = 0;
  std::set<std::string> labels;
  lookup_.clear();
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    const auto& c = classes_[i];
    if (!labels.insert(c.label).second) bad(origin, "duplicate class label " + c.label);
    total += c.size;
    for (const auto& pat : c.patterns) {
      const unsigned s = std::accumulate(pat.begin(), pat.end(), 0u);
      if (s != static_cast<unsigned>(n)) {
        bad(origin, "pattern of class " + c.label + " does not sum to deg f = " + std::to_string(n));
      }
      for (const auto& [other, idx] : lookup_) {
        if (other == pat) {
          bad(origin, "pattern shared by classes " + classes_[idx].label + " and " + c.label +
                          "; cycle type does not separate classes");
        }
      }
      lookup_.emplace_back(pat, i);
    }
  }
  if (total != group_order_) {
    bad(origin, "class sizes sum to " + std::to_string(total) + ", group order is " +
                    std::to_string(group_order_));
  }
  ramified_ = prime_divisors(disc_L_);
}

GaloisContext GaloisContext::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::InvalidContext, "cannot open context file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

GaloisContext GaloisContext::resolve(const std::string& name_or_path) {
  namespace fs = std::filesystem;
  if (fs::exists(name_or_path) && fs::is_regular_file(name_or_path)) return load(name_or_path);
  const fs::path shipped = fs::path(CHEBEATTY_DATA_DIR) / "contexts" / (name_or_path + ".ctx");
  if (fs::exists(shipped)) return load(shipped.string());
  if (name_or_path == "s3_x3m2") return s3_x3m2();
  raise(ErrorCode::InvalidContext, "no context named " + name_or_path);
}

GaloisContext GaloisContext::s3_x3m2() { return parse(kS3Context, "builtin s3_x3m2"); }

bool GaloisContext::is_ramified(std::uint64_t p) const {
  return std::find(ramified_.begin(), ramified_.end(), p) != ramified_.end();
}

std::size_t GaloisContext::class_index(const std::string& label) const {
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    if (classes_[i].label == label) return i;
  }
  raise(ErrorCode::InvalidArgument, "no class labelled '" + label + "' in " + name_);
}

std::optional<std::size_t> GaloisContext::artin_class(std::uint64_t p) const {
  if (is_ramified(p)) return std::nullopt;
  const auto pat = factorization_pattern(poly_, disc_f_, p);
  for (const auto& [q, idx] : lookup_) {
    if (q == pat) return idx;
  }
  std::string s;
  for (unsigned d : pat) s += (s.empty() ? "" : ",") + std::to_string(d);
  raise(ErrorCode::PatternNotClassified, "pattern [" + s + "] at p = " + std::to_string(p) +
                                             " matches no class of " + name_);
}

std::string GaloisContext::to_json() const {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["name"] = name_;
  json poly = json::array();
  for (const auto& c : poly_) {
    if (c.fits_slong_p()) {
      poly.push_back(c.get_si());
    } else {
      poly.push_back(c.get_str());
    }
  }
  j["polynomial"] = poly;
  j["group_order"] = group_order_;
  if (disc_L_.fits_slong_p()) {
    j["disc_L"] = disc_L_.get_si();
  } else {
    j["disc_L"] = disc_L_.get_str();
  }
  j["f_ab"] = f_ab_;
  json cls = json::array();
  for (const auto& c : classes_) {
    cls.push_back({{"label", c.label}, {"size", c.size}, {"d", c.d}, {"patterns", c.patterns}});
  }
  j["classes"] = cls;
  return j.dump();
}

std::string artin_label(std::uint64_t p, const GaloisContext& ctx) {
  const auto c = ctx.artin_class(p);
  return c ? ctx.classes()[*c].label : "ramified";
}

}  // namespace chebeatty::galois
