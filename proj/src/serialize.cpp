#include "kst/serialize.hpp"

#include <charconv>
#include <ostream>

#include "json.hpp"
#include "kst/errors.hpp"

namespace kst {

using nlohmann::json;

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

json inner_to_json(const InnerMap& m) {
  json components = json::array();
  for (int k = 1; k <= InnerMap::kComponents; ++k) {
    json bps = json::array();
    for (const auto& bp : m.component(k).breakpoints())
      bps.push_back(json::array({bp.pos.str(), bp.value.str()}));
    json plats = json::array();
    for (const auto& p : m.plateaus(k)) plats.push_back(p.str());
    components.push_back({{"k", k}, {"breakpoints", bps}, {"plateaus", plats}});
  }
  return {{"N", m.resolution()}, {"epsilon", m.epsilon()}, {"components", components}};
}

InnerMap inner_from_json(const json& j) {
  const int N = j.at("N").get<int>();
  const double eps = j.at("epsilon").get<double>();
  std::vector<PLFunction> comps;
  std::array<std::vector<Rational>, 5> plateaus;
  const auto& components = j.at("components");
  if (!components.is_array() || components.size() != 5)
    throw ConfigError("inner map document needs exactly 5 components");
  for (const auto& c : components) {
    const int k = c.at("k").get<int>();
    if (k < 1 || k > 5) throw ConfigError("inner map component k out of range");
    std::vector<Breakpoint> pts;
    for (const auto& bp : c.at("breakpoints"))
      pts.push_back({Rational::from_string(bp.at(0).get<std::string>()),
                     Rational::from_string(bp.at(1).get<std::string>())});
    comps.emplace_back(Rational(0), Rational(1), std::move(pts));
    auto& plat = plateaus[static_cast<size_t>(k - 1)];
    for (const auto& p : c.at("plateaus"))
      plat.push_back(Rational::from_string(p.get<std::string>()));
  }
  InnerMap m = InnerMap::from_parts_unchecked(N, eps, std::move(comps), std::move(plateaus));
  try {
    m.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("inner map document fails validation: ") + e.what());
  }
  return m;
}

json outer_to_json(const OuterFunction& h) {
  if (h.table_backed()) {
    json knots = json::array();
    const auto& table = h.table();
    for (size_t idx = 0; idx < table.size(); ++idx) {
      const auto& e = table.entry(idx);
      knots.push_back(json::array({e.k, e.i, e.j, h.knot_value(idx)}));
    }
    return {{"knots", knots}};
  }
  json knots = json::array();
  for (const auto& kn : h.explicit_knots())
    knots.push_back({{"a", kn.pos.a().str()}, {"b", kn.pos.b().str()}, {"v", kn.value}});
  return {{"knots_exact", knots}};
}

OuterFunction outer_from_json(const json& j, const InnerMap& phi) {
  if (j.contains("knots_exact")) {
    std::vector<OuterFunction::ExactKnot> knots;
    for (const auto& kn : j.at("knots_exact"))
      knots.push_back({QuadExt(Rational::from_string(kn.at("a").get<std::string>()),
                               Rational::from_string(kn.at("b").get<std::string>())),
                       kn.at("v").get<double>()});
    return OuterFunction(std::move(knots));
  }
  const auto store = make_plateau_store(phi);
  std::vector<PlateauImageTable::Entry> entries;
  std::vector<double> values;
  for (const auto& kn : j.at("knots")) {
    const int k = kn.at(0).get<int>();
    const int32_t i = kn.at(1).get<int32_t>();
    const int32_t jj = kn.at(2).get<int32_t>();
    if (k < 1 || k > 5) throw ConfigError("outer knot family out of range");
    const auto& vf = store->values_f[static_cast<size_t>(k - 1)];
    if (i + 1 < 0 || jj + 1 < 0 || static_cast<size_t>(i + 1) >= vf.size() ||
        static_cast<size_t>(jj + 1) >= vf.size())
      throw ConfigError("outer knot index outside Z_k");
    const double pos = vf[static_cast<size_t>(i + 1)] + kSqrt2 * vf[static_cast<size_t>(jj + 1)];
    entries.push_back({pos, i, jj, k});
    values.push_back(kn.at(3).get<double>());
  }
  try {
    PlateauImageTable table(store, std::move(entries), /*verify=*/true);
    return OuterFunction(std::move(table), std::move(values));
  } catch (const Error& e) {
    throw ConfigError(std::string("outer knots fail validation: ") + e.what());
  }
}

json norm_to_json(const SupNormEstimate& n) {
  json j = {{"value", n.value}, {"grid", n.grid}};
  j["certified"] = n.certified_bound ? json(*n.certified_bound) : json(nullptr);
  return j;
}

SupNormEstimate norm_from_json(const json& j) {
  SupNormEstimate n;
  n.value = j.at("value").get<double>();
  n.grid = j.at("grid").get<int>();
  if (!j.at("certified").is_null()) n.certified_bound = j.at("certified").get<double>();
  return n;
}

}  // namespace

std::string serialize_model(const KSRepresentation& rep) {
  json doc;
  doc["format"] = "kst-model/1";
  doc["mode"] = rep.mode == SolveMode::Adaptive ? "adaptive" : "fixed";
  doc["target"] = rep.target_spec;
  doc["epsilon"] = rep.epsilon;
  doc["norm_f"] = norm_to_json(rep.norm_f);
  if (rep.mode == SolveMode::Fixed && !rep.stages.empty())
    doc["fixed_inner"] = inner_to_json(*rep.stages.front().phi);
  json stages = json::array();
  for (const auto& st : rep.stages) {
    json s;
    s["m"] = st.m;
    s["N"] = st.N;
    s["residual_before"] = norm_to_json(st.residual_before);
    s["residual_after"] = norm_to_json(st.residual_after);
    s["h_norm"] = st.h_norm;
    s["millis"] = st.millis;
    if (rep.mode == SolveMode::Adaptive) s["inner"] = inner_to_json(*st.phi);
    s["outer"] = outer_to_json(*st.h);
    stages.push_back(std::move(s));
  }
  doc["stages"] = std::move(stages);
  return doc.dump(1);
}

KSRepresentation deserialize_model(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed model document: ") + e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != "kst-model/1")
      throw ConfigError("model format version mismatch (want kst-model/1)");
    KSRepresentation rep;
    rep.mode = doc.at("mode").get<std::string>() == "fixed" ? SolveMode::Fixed
                                                            : SolveMode::Adaptive;
    rep.target_spec = doc.at("target").get<std::string>();
    rep.epsilon = doc.at("epsilon").get<double>();
    rep.norm_f = norm_from_json(doc.at("norm_f"));
    std::shared_ptr<const InnerMap> fixed_phi;
    if (doc.contains("fixed_inner"))
      fixed_phi = std::make_shared<InnerMap>(inner_from_json(doc.at("fixed_inner")));
    for (const auto& s : doc.at("stages")) {
      Stage st;
      st.m = s.at("m").get<int>();
      st.N = s.at("N").get<int>();
      st.residual_before = norm_from_json(s.at("residual_before"));
      st.residual_after = norm_from_json(s.at("residual_after"));
      st.h_norm = s.at("h_norm").get<double>();
      st.millis = s.at("millis").get<long>();
      std::shared_ptr<const InnerMap> phi =
          rep.mode == SolveMode::Adaptive
              ? std::make_shared<InnerMap>(inner_from_json(s.at("inner")))
              : fixed_phi;
      if (!phi) throw ConfigError("fixed-mode model lacks fixed_inner");
      st.phi = phi;
      st.h = std::make_shared<OuterFunction>(outer_from_json(s.at("outer"), *phi));
      rep.stages.push_back(std::move(st));
    }
    return rep;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed model document: ") + e.what());
  }
}

std::string serialize_inner(const InnerMap& map) {
  json doc;
  doc["format"] = "kst-inner/1";
  doc["inner"] = inner_to_json(map);
  return doc.dump(1);
}

InnerMap deserialize_inner(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed inner-map document: ") + e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != "kst-inner/1")
      throw ConfigError("inner-map format version mismatch (want kst-inner/1)");
    return inner_from_json(doc.at("inner"));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed inner-map document: ") + e.what());
  }
}

void write_report_csv(std::ostream& os, const RunReport& report) {
  os << "# kst-report/1 config=" << report.config_json << "\n";
  os << "# norm_f=" << format_double(report.norm_f) << "\n";
  if (!report.diagnostic.empty()) os << "# diagnostic=" << report.diagnostic << "\n";
  os << "m,N,res_before,res_after,ratio,h_norm,lambda_bound,millis\n";
  for (const auto& r : report.rows) {
    os << r.m << ',' << r.N << ',' << format_double(r.res_before) << ','
       << format_double(r.res_after) << ',' << format_double(r.ratio) << ','
       << format_double(r.h_norm) << ',' << format_double(r.lambda_bound) << ','
       << r.millis << '\n';
  }
}

void write_residual_csv(std::ostream& os, const F2D& f, const KSRepresentation& rep, int grid) {
  os << "x,y,f,S_phi_h,residual\n";
  const auto terms = rep.terms();
  for_each_grid_point(f, terms, grid, [&os](double x, double y, double fv, double sv) {
    os << format_double(x) << ',' << format_double(y) << ',' << format_double(fv) << ','
       << format_double(sv) << ',' << format_double(fv - sv) << '\n';
  });
}

}  // namespace kst
