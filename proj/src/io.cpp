#include "qtree/io.hpp"

#include <cstdio>
#include <fstream>

#include "qtree/error.hpp"

namespace qtree {

json tree_to_json(const RootedTree& t) {
  json edges = json::array();
  for (auto [a, b] : t.edges()) edges.push_back({a, b});
  return {{"p", t.p()}, {"root", t.root()}, {"edges", edges}};
}

RootedTree tree_from_json(const json& j) {
  try {
    std::vector<Edge> e;
    for (const auto& x : j.at("edges")) {
      if (!x.is_array() || x.size() != 2) throw Error("bad_json", "tree edges must be pairs");
      e.push_back({x[0].get<int>(), x[1].get<int>()});
    }
    return from_edge_list(j.at("p").get<int>(), j.value("root", 0), e);
  } catch (const json::exception& ex) {
    throw Error("bad_json", std::string("malformed tree JSON: ") + ex.what());
  }
}

json poly_to_json(const Poly& p) {
  json c = json::array();
  for (const auto& x : p.coeffs()) c.push_back(x.str());
  return {{"coeffs", c}};
}

Poly poly_from_json(const json& j) {
  try {
    std::vector<Rational> c;
    for (const auto& x : j.at("coeffs")) {
      if (x.is_string()) c.emplace_back(Rational(x.get<std::string>()));
      else if (x.is_number_integer()) c.emplace_back(x.get<long long>());
      else throw Error("bad_json", "polynomial coefficients must be decimal strings or integers");
    }
    return Poly(std::move(c));
  } catch (const json::exception& ex) {
    throw Error("bad_json", std::string("malformed polynomial JSON: ") + ex.what());
  } catch (const std::runtime_error& ex) {
    if (dynamic_cast<const Error*>(&ex)) throw;
    throw Error("bad_json", std::string("bad polynomial coefficient: ") + ex.what());
  }
}

json potential_to_json(const Potential& p) {
  switch (p.kind()) {
    case Potential::Kind::Zero: return {{"kind", "zero"}, {"ell", p.ell()}};
    case Potential::Kind::Constant: return {{"kind", "constant"}, {"q", p.q()}, {"ell", p.ell()}};
    case Potential::Kind::Sampled: return {{"kind", "sampled"}, {"ell", p.ell()}, {"values", p.values()}};
  }
  return {};
}

Potential potential_from_json(const json& j) {
  try {
    std::string kind = j.at("kind").get<std::string>();
    double ell = j.value("ell", 1.0);
    if (kind == "zero") return Potential::zero(ell);
    if (kind == "constant") return Potential::constant(j.at("q").get<double>(), ell);
    if (kind == "sampled") return Potential::sampled(j.at("values").get<std::vector<double>>(), ell);
    throw Error("bad_potential", "unknown potential kind: " + kind);
  } catch (const json::exception& ex) {
    throw Error("bad_json", std::string("malformed potential JSON: ") + ex.what());
  }
}

Potential parse_potential_spec(const std::string& spec, double ell) {
  if (spec == "zero") return Potential::zero(ell);
  if (spec.rfind("const:", 0) == 0) {
    try {
      size_t used = 0;
      std::string v = spec.substr(6);
      double q = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
      return Potential::constant(q, ell);
    } catch (const std::logic_error&) {
      throw Error("bad_potential", "bad constant in potential spec: " + spec);
    }
  }
  if (spec.rfind("sampled:", 0) == 0) {
    json j = read_json_file(spec.substr(8));
    if (j.is_array()) return Potential::sampled(j.get<std::vector<double>>(), ell);
    if (!j.contains("ell")) j["ell"] = ell;
    if (!j.contains("kind")) j["kind"] = "sampled";
    return potential_from_json(j);
  }
  throw Error("bad_potential", "potential spec must be zero, const:Q or sampled:FILE");
}

json record_to_json(const ScatteringRecord& r) {
  return {{"p", r.p},
          {"ell", r.ell},
          {"f", r.f},
          {"f_hat", r.f_hat},
          {"m", r.m},
          {"common_eigenvalues", r.common_eigenvalues},
          {"n_used", r.n_used},
          {"meta", {{"potential", potential_to_json(r.potential)}, {"window", r.window}}}};
}

ScatteringRecord record_from_json(const json& j) {
  try {
    ScatteringRecord r;
    r.p = j.at("p").get<int>();
    r.ell = j.value("ell", 1.0);
    r.f = j.at("f").get<std::vector<double>>();
    r.f_hat = j.at("f_hat").get<std::vector<double>>();
    r.m = j.value("m", 0);
    r.common_eigenvalues = j.value("common_eigenvalues", std::vector<double>{});
    r.n_used = j.value("n_used", 0);
    // the potential is metadata; the inverse side never reads it
    r.potential = Potential::zero(r.ell > 0 ? r.ell : 1.0);
    if (j.contains("meta")) {
      const auto& meta = j.at("meta");
      if (meta.contains("potential")) r.potential = potential_from_json(meta.at("potential"));
      r.window = meta.value("window", 0.0);
    }
    return r;
  } catch (const json::exception& ex) {
    throw Error("bad_json", std::string("malformed record JSON: ") + ex.what());
  }
}

json recovery_to_json(const RecoveryResult& r) {
  json shapes = json::array();
  for (const auto& t : r.shapes) shapes.push_back(tree_to_json(t));
  json trace = json::array();
  for (const auto& e : r.trace) {
    json split = json::array();
    for (const auto& s : e.splitting) split.push_back(poly_to_json(s));
    json entry = {{"branch", e.branch}, {"d0", e.d0}, {"splitting", split},
                  {"diophantine", e.diophantine}, {"status", e.status}};
    if (!e.reason.empty()) entry["reason"] = e.reason;
    trace.push_back(entry);
  }
  return {{"shapes", shapes}, {"trace", trace}};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io", "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& ex) {
    throw Error("bad_json", path + ": " + ex.what());
  }
}

std::string csv_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

} // namespace qtree
