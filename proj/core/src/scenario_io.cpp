#include "filtlab/scenario.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "filtlab/hypotheses.hpp"

namespace filtlab {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  fail(ErrorCode::ValidationError, where + ": " + what);
}

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed, bool strict) {
  if (!strict) return;
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) ok = true;
    if (!ok) bad(where + "/" + it.key(), "unknown key in strict mode");
  }
}

Rational rat(const json& j, const std::string& where) {
  if (!j.is_string()) bad(where, "rational values are \"p/q\" strings");
  try {
    return Rational::parse(j.get<std::string>());
  } catch (const Error& e) {
    bad(where, e.what());
  }
}

int slot_value(const json& j, const Timeline& timeline, const std::string& where) {
  if (!j.is_string()) bad(where, "times are \"0\"..\"T\" or \"inf\" strings");
  const std::string s = j.get<std::string>();
  if (s == "inf") return timeline.inf_slot();
  try {
    const int v = std::stoi(s);
    if (v < 0 || v > timeline.horizon) bad(where, "time '" + s + "' outside 0..horizon");
    return v;
  } catch (const std::exception&) {
    bad(where, "bad time literal '" + s + "'");
  }
}

RandomVariable rv(const json& j, int n_atoms, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != n_atoms)
    bad(where, "expected one rational per atom");
  RandomVariable out = RandomVariable::constant(n_atoms, Rational());
  for (int a = 0; a < n_atoms; ++a) out[a] = rat(j[a], where + "/" + std::to_string(a));
  return out;
}

ProcessKind parse_kind(const json& j, const std::string& where) {
  const std::string s = j.is_string() ? j.get<std::string>() : "";
  if (s == "raw") return ProcessKind::Raw;
  if (s == "adapted") return ProcessKind::Adapted;
  if (s == "predictable") return ProcessKind::Predictable;
  if (s == "increasing") return ProcessKind::Increasing;
  if (s == "finite-variation") return ProcessKind::FiniteVariation;
  bad(where, "unknown process kind '" + s + "'");
}

Process parse_process(const json& j, const FilteredSpace& space, const std::string& where,
                      bool strict) {
  if (!j.is_object()) bad(where, "process must be an object");
  check_keys(j, where, {"kind", "values"}, strict);
  if (!j.contains("kind") || !j.contains("values")) bad(where, "process needs kind and values");
  Process p;
  p.kind = parse_kind(j["kind"], where + "/kind");
  const json& vals = j["values"];
  if (!vals.is_array() || static_cast<int>(vals.size()) != space.timeline().slots())
    bad(where + "/values", "expected horizon+2 slot rows (0..T and inf)");
  p.at.reserve(vals.size());
  for (size_t s = 0; s < vals.size(); ++s)
    p.at.push_back(rv(vals[s], space.n_atoms(), where + "/values/" + std::to_string(s)));
  // The kind annotation is a claim; hold the file to it.
  switch (p.kind) {
    case ProcessKind::Raw:
      break;
    case ProcessKind::Adapted:
    case ProcessKind::FiniteVariation:
      if (!is_adapted(space, p)) bad(where, "values are not adapted as claimed");
      break;
    case ProcessKind::Predictable:
      if (!is_predictable(space, p)) bad(where, "values are not predictable as claimed");
      break;
    case ProcessKind::Increasing:
      if (!is_adapted(space, p)) bad(where, "values are not adapted as claimed");
      if (!is_increasing(p)) bad(where, "values are not increasing as claimed");
      break;
  }
  return p;
}

json dump_rv(const RandomVariable& v) {
  json out = json::array();
  for (const auto& x : v.values) out.push_back(x.str());
  return out;
}

json dump_process(const Process& p) {
  json out;
  out["kind"] = to_string(p.kind);
  json vals = json::array();
  for (const auto& v : p.at) vals.push_back(dump_rv(v));
  out["values"] = std::move(vals);
  return out;
}

}  // namespace

Scenario parse_scenario(const std::string& text, bool strict) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, e.what());
  }
  if (!root.is_object()) bad("/", "top level must be an object");
  check_keys(root, "", {"version", "atoms", "probabilities", "horizon", "filtration", "tau",
                        "processes", "field", "ed", "market"},
             strict);
  for (const char* key : {"version", "atoms", "probabilities", "horizon", "filtration"})
    if (!root.contains(key)) bad(std::string("/") + key, "missing required key");
  if (!root["version"].is_string() || root["version"].get<std::string>() != "1")
    bad("/version", "unsupported version");

  if (!root["atoms"].is_array() || root["atoms"].empty()) bad("/atoms", "need a non-empty list");
  std::vector<std::string> atoms;
  for (size_t i = 0; i < root["atoms"].size(); ++i) {
    if (!root["atoms"][i].is_string()) bad("/atoms/" + std::to_string(i), "atom names are strings");
    atoms.push_back(root["atoms"][i].get<std::string>());
  }
  const int n = static_cast<int>(atoms.size());

  if (!root["horizon"].is_number_integer()) bad("/horizon", "must be an integer");
  const int horizon = root["horizon"].get<int>();
  if (horizon < 0) bad("/horizon", "must be nonnegative");
  const Timeline timeline{horizon};

  if (!root["probabilities"].is_array() || static_cast<int>(root["probabilities"].size()) != n)
    bad("/probabilities", "need one rational per atom");
  std::vector<Rational> prob;
  for (int a = 0; a < n; ++a)
    prob.push_back(rat(root["probabilities"][a], "/probabilities/" + std::to_string(a)));

  if (!root["filtration"].is_array() || static_cast<int>(root["filtration"].size()) != horizon + 1)
    bad("/filtration", "need horizon+1 partitions");
  std::vector<Partition> parts;
  for (int t = 0; t <= horizon; ++t) {
    const json& jp = root["filtration"][t];
    const std::string where = "/filtration/" + std::to_string(t);
    if (!jp.is_array()) bad(where, "partition must be a list of blocks");
    std::vector<std::vector<int>> blocks;
    for (size_t b = 0; b < jp.size(); ++b) {
      if (!jp[b].is_array()) bad(where + "/" + std::to_string(b), "block must be a list of atoms");
      std::vector<int> block;
      for (const auto& name : jp[b]) {
        if (!name.is_string()) bad(where, "atoms are referenced by name");
        int idx = -1;
        for (int a = 0; a < n; ++a)
          if (atoms[a] == name.get<std::string>()) idx = a;
        if (idx < 0) bad(where, "unknown atom '" + name.get<std::string>() + "'");
        block.push_back(idx);
      }
      blocks.push_back(std::move(block));
    }
    try {
      parts.push_back(Partition::from_blocks(n, blocks));
    } catch (const Error& e) {
      bad(where, e.what());
    }
  }

  Scenario sc;
  try {
    sc.space = build_space(atoms, prob, horizon, parts);
  } catch (const Error& e) {
    switch (e.code()) {
      case ErrorCode::ProbabilityNotNormalized:
      case ErrorCode::ZeroProbabilityBlock:
        bad("/probabilities", e.what());
      case ErrorCode::PartitionNotRefining:
        bad("/filtration", e.what());
      default:
        throw;
    }
  }

  if (root.contains("tau")) {
    const json& jt = root["tau"];
    if (!jt.is_array() || static_cast<int>(jt.size()) != n)
      bad("/tau", "need one time per atom");
    RandomTime tau;
    for (int a = 0; a < n; ++a)
      tau.value.push_back(slot_value(jt[a], timeline, "/tau/" + std::to_string(a)));
    sc.tau = std::move(tau);
  }

  if (root.contains("processes")) {
    if (!root["processes"].is_object()) bad("/processes", "must be an object of named processes");
    for (auto it = root["processes"].begin(); it != root["processes"].end(); ++it)
      sc.processes.emplace(it.key(),
                           parse_process(it.value(), sc.space, "/processes/" + it.key(), strict));
  }

  if (root.contains("field")) {
    const json& jf = root["field"];
    const int S = timeline.slots();
    if (!jf.is_array() || static_cast<int>(jf.size()) != S)
      bad("/field", "dense table needs horizon+2 u-rows (0..T and inf)");
    std::vector<std::vector<RandomVariable>> table(S);
    for (int u = 0; u < S; ++u) {
      if (!jf[u].is_array() || static_cast<int>(jf[u].size()) != S)
        bad("/field/" + std::to_string(u), "dense row needs horizon+2 t-columns");
      table[u].reserve(S);
      for (int t = 0; t < S; ++t)
        table[u].push_back(
            rv(jf[u][t], n, "/field/" + std::to_string(u) + "/" + std::to_string(t)));
    }
    CondDistField field(timeline, std::move(table));
    try {
      field.validate(sc.space);
    } catch (const Error& e) {
      bad("/field", e.what());
    }
    sc.field = std::move(field);
  }

  if (root.contains("ed")) {
    const json& je = root["ed"];
    if (!je.is_object()) bad("/ed", "must be an object");
    check_keys(je, "/ed", {"m", "d"}, strict);
    if (!je.contains("m") || !je.contains("d")) bad("/ed", "needs kernel m and clock d");
    const int S = timeline.slots();
    if (!je["m"].is_array() || static_cast<int>(je["m"].size()) != S)
      bad("/ed/m", "kernel needs one row per s slot");
    EDData ed;
    ed.m.resize(S);
    for (int s = 0; s < S; ++s) {
      const json& row = je["m"][s];
      if (!row.is_array() || static_cast<int>(row.size()) != S - s)
        bad("/ed/m/" + std::to_string(s), "row s covers t = s..inf");
      for (int i = 0; i < S - s; ++i)
        ed.m[s].push_back(rv(row[i], n, "/ed/m/" + std::to_string(s) + "/" + std::to_string(i)));
    }
    ed.d = parse_process(je["d"], sc.space, "/ed/d", strict);
    if (auto w = verify_ed_intrinsic(sc.space, ed)) bad("/ed", w->detail);
    sc.ed = std::move(ed);
  }

  if (root.contains("market")) {
    const json& jm = root["market"];
    if (!jm.is_object()) bad("/market", "must be an object");
    check_keys(jm, "/market", {"x"}, strict);
    if (!jm.contains("x")) bad("/market", "needs a price process x");
    sc.market_x = parse_process(jm["x"], sc.space, "/market/x", strict);
  }
  return sc;
}

Scenario load_scenario(const std::string& path, bool strict) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ParseError, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), strict);
}

std::string serialize_scenario(const Scenario& sc) {
  const FilteredSpace& space = sc.space;
  json root;
  root["version"] = "1";
  root["horizon"] = space.horizon();
  root["atoms"] = space.atom_names();
  json probs = json::array();
  for (int a = 0; a < space.n_atoms(); ++a) probs.push_back(space.prob(a).str());
  root["probabilities"] = std::move(probs);
  json filt = json::array();
  for (int t = 0; t <= space.horizon(); ++t) {
    json jp = json::array();
    for (const auto& block : space.partition_at(t).blocks()) {
      json jb = json::array();
      for (int a : block) jb.push_back(space.atom_name(a));
      jp.push_back(std::move(jb));
    }
    filt.push_back(std::move(jp));
  }
  root["filtration"] = std::move(filt);

  if (sc.tau) {
    json jt = json::array();
    for (int a = 0; a < space.n_atoms(); ++a)
      jt.push_back(space.timeline().label((*sc.tau)[a]));
    root["tau"] = std::move(jt);
  }
  if (!sc.processes.empty()) {
    json jp;
    for (const auto& [name, proc] : sc.processes) jp[name] = dump_process(proc);
    root["processes"] = std::move(jp);
  }
  if (sc.field) {
    const int S = space.timeline().slots();
    json jf = json::array();
    for (int u = 0; u < S; ++u) {
      json row = json::array();
      for (int t = 0; t < S; ++t) row.push_back(dump_rv(sc.field->at(u, t)));
      jf.push_back(std::move(row));
    }
    root["field"] = std::move(jf);
  }
  if (sc.ed) {
    json je;
    json jm = json::array();
    for (const auto& row : sc.ed->m) {
      json jrow = json::array();
      for (const auto& v : row) jrow.push_back(dump_rv(v));
      jm.push_back(std::move(jrow));
    }
    je["m"] = std::move(jm);
    je["d"] = dump_process(sc.ed->d);
    root["ed"] = std::move(je);
  }
  if (sc.market_x) {
    json jm;
    jm["x"] = dump_process(*sc.market_x);
    root["market"] = std::move(jm);
  }
  return root.dump(2) + "\n";
}

void save_scenario(const Scenario& scenario, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::ValidationError, "cannot write '" + path + "'");
  out << serialize_scenario(scenario);
}

}  // namespace filtlab
