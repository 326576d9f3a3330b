#include "mtdbench/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "mtdbench/rng.hpp"

namespace mtdbench {

namespace {

using json = nlohmann::ordered_json;

void expect_keys(const json& obj, const std::set<std::string>& required,
                 const std::set<std::string>& optional, const std::string& where) {
  if (!obj.is_object()) throw ModelError(where + ": expected a JSON object");
  for (const auto& [key, value] : obj.items()) {
    if (!required.count(key) && !optional.count(key))
      throw ModelError(where + ": unknown field '" + key + "'");
  }
  for (const std::string& key : required) {
    if (!obj.contains(key))
      throw ModelError(where + ": missing field '" + key + "'");
  }
}

double number_field(const json& obj, const char* key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_number()) throw ModelError(where + ": field '" + key + "' must be a number");
  return v.get<double>();
}

Vulnerability vulnerability_from_json(const json& obj, const std::string& where) {
  expect_keys(obj,
              {"id", "cve_id", "impact", "exploitability", "base_score",
               "attack_cost", "exposure_factor"},
              {"threat"}, where);
  Vulnerability v;
  v.id = obj.at("id").get<std::string>();
  v.cve_id = obj.at("cve_id").get<std::string>();
  v.impact = number_field(obj, "impact", where);
  v.exploitability = number_field(obj, "exploitability", where);
  v.base_score = number_field(obj, "base_score", where);
  v.attack_cost = number_field(obj, "attack_cost", where);
  v.exposure_factor = number_field(obj, "exposure_factor", where);
  if (obj.contains("threat")) v.threat = obj.at("threat").get<std::string>();
  return v;
}

json vulnerability_to_json(const Vulnerability& v) {
  json obj;
  obj["id"] = v.id;
  obj["cve_id"] = v.cve_id;
  obj["impact"] = v.impact;
  obj["exploitability"] = v.exploitability;
  obj["base_score"] = v.base_score;
  obj["attack_cost"] = v.attack_cost;
  obj["exposure_factor"] = v.exposure_factor;
  obj["threat"] = v.threat;
  return obj;
}

BackupOs backup_from_json(const json& obj, const std::string& where) {
  expect_keys(obj,
              {"index", "name", "exposure_factor", "cost_of_security",
               "asset_value", "vuln_count"},
              {"vulnerabilities"}, where);
  BackupOs b;
  b.index = obj.at("index").get<int>();
  b.name = obj.at("name").get<std::string>();
  b.exposure_factor = number_field(obj, "exposure_factor", where);
  b.cost_of_security = number_field(obj, "cost_of_security", where);
  b.asset_value = number_field(obj, "asset_value", where);
  b.vuln_count = obj.at("vuln_count").get<int>();
  if (obj.contains("vulnerabilities")) {
    std::vector<Vulnerability> vulns;
    for (const json& item : obj.at("vulnerabilities"))
      vulns.push_back(vulnerability_from_json(item, where + ".vulnerabilities"));
    b.vulnerabilities = std::move(vulns);
  }
  return b;
}

json backup_to_json(const BackupOs& b) {
  json obj;
  obj["index"] = b.index;
  obj["name"] = b.name;
  obj["exposure_factor"] = b.exposure_factor;
  obj["cost_of_security"] = b.cost_of_security;
  obj["asset_value"] = b.asset_value;
  obj["vuln_count"] = b.vuln_count;
  if (b.vulnerabilities) {
    json list = json::array();
    for (const Vulnerability& v : *b.vulnerabilities)
      list.push_back(vulnerability_to_json(v));
    obj["vulnerabilities"] = std::move(list);
  }
  return obj;
}

NodeId node_from_json(const json& slot, const std::string& where) {
  if (slot.is_string()) {
    if (slot.get<std::string>() != "A")
      throw ModelError(where + ": only \"A\" names the attacker");
    return kAttackerId;
  }
  if (!slot.is_number_integer())
    throw ModelError(where + ": node must be \"A\" or an integer vm id");
  return slot.get<NodeId>();
}

json node_to_json(NodeId id) {
  if (id == kAttackerId) return json("A");
  return json(id);
}

Vulnerability make_vuln(const char* id, const char* cve, double base_score,
                        double impact, double exploitability, double attack_cost,
                        double exposure_factor, const char* threat) {
  Vulnerability v;
  v.id = id;
  v.cve_id = cve;
  v.base_score = base_score;
  v.impact = impact;
  v.exploitability = exploitability;
  v.attack_cost = attack_cost;
  v.exposure_factor = exposure_factor;
  v.threat = threat;
  return v;
}

std::vector<Vulnerability> win10_profile() {
  return {
      make_vuln("v1,W", "CVE-2018-8490", 8.4, 6.0, 0.17, 1.6, 0.60, "Remote"),
      make_vuln("v2,W", "CVE-2018-8484", 7.8, 5.9, 0.18, 2.2, 0.59,
                "Privilege Escalation"),
      make_vuln("v3,W", "CVE-2016-3209", 8.8, 5.9, 0.28, 1.2, 0.59,
                "Privilege Elevation"),
  };
}

std::vector<Vulnerability> linux_profile() {
  return {
      make_vuln("v1,L", "CVE-2018-14678", 7.8, 5.9, 0.18, 2.2, 0.59, "DDoS"),
      make_vuln("v2,L", "CVE-2018-14633", 7.0, 4.7, 0.22, 3.0, 0.47,
                "DDoS & Remote"),
      make_vuln("v3,L", "CVE-2017-15126", 8.1, 5.9, 0.22, 1.9, 0.59,
                "Use After Free (UAF)"),
  };
}

std::vector<Vulnerability> fedora_profile() {
  return {
      make_vuln("v1,F", "CVE-2014-1859", 5.5, 3.6, 0.18, 4.5, 0.30,
                "Symlink attack"),
  };
}

BackupOs make_backup(int index, const char* name, double ef, double cs, double av,
                     int vuln_count) {
  BackupOs b;
  b.index = index;
  b.name = name;
  b.exposure_factor = ef;
  b.cost_of_security = cs;
  b.asset_value = av;
  b.vuln_count = vuln_count;
  return b;
}

}  // namespace

ScenarioDescription scenario_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ModelError(std::string("scenario is not valid JSON: ") + e.what());
  }

  expect_keys(doc, {"vms", "edges", "attacker", "target", "os_catalog", "backups"},
              {"metadata"}, "scenario");

  ScenarioDescription sc;
  if (doc.contains("metadata")) {
    const json& meta = doc.at("metadata");
    expect_keys(meta, {}, {"name", "description"}, "metadata");
    if (meta.contains("name")) sc.name = meta.at("name").get<std::string>();
    if (meta.contains("description"))
      sc.description = meta.at("description").get<std::string>();
  }

  if (!doc.at("attacker").is_string() || doc.at("attacker").get<std::string>() != "A")
    throw ModelError("scenario: attacker must be the string \"A\"");
  sc.target_id = doc.at("target").get<NodeId>();

  for (const json& item : doc.at("vms")) {
    expect_keys(item, {"id", "os", "asset_value"}, {"aro"}, "vm");
    VmNode vm;
    vm.id = item.at("id").get<NodeId>();
    vm.os_name = item.at("os").get<std::string>();
    vm.asset_value = number_field(item, "asset_value", "vm");
    vm.aro = item.contains("aro") ? number_field(item, "aro", "vm") : 1.0;
    sc.vms.push_back(std::move(vm));
  }

  for (const json& item : doc.at("edges")) {
    if (!item.is_array() || item.size() != 2)
      throw ModelError("scenario: each edge must be a [src, dst] pair");
    sc.edges.emplace_back(node_from_json(item.at(0), "edge"),
                          node_from_json(item.at(1), "edge"));
  }

  for (const auto& [os_name, vulns] : doc.at("os_catalog").items()) {
    std::vector<Vulnerability> list;
    for (const json& item : vulns)
      list.push_back(vulnerability_from_json(item, "os_catalog." + os_name));
    sc.os_catalog.emplace(os_name, std::move(list));
  }

  for (const json& item : doc.at("backups"))
    sc.backups.push_back(backup_from_json(item, "backup"));

  for (const VmNode& vm : sc.vms) {
    if (!sc.os_catalog.count(vm.os_name))
      throw ModelError("scenario: vm" + std::to_string(vm.id) + " references os '" +
                       vm.os_name + "' missing from os_catalog");
  }
  return sc;
}

std::string scenario_to_json(const ScenarioDescription& sc) {
  json doc;
  doc["metadata"] = {{"name", sc.name}, {"description", sc.description}};
  json vms = json::array();
  for (const VmNode& vm : sc.vms) {
    json node;
    node["id"] = vm.id;
    node["os"] = vm.os_name;
    node["asset_value"] = vm.asset_value;
    node["aro"] = vm.aro;
    vms.push_back(std::move(node));
  }
  doc["vms"] = std::move(vms);
  json edges = json::array();
  for (const auto& [src, dst] : sc.edges)
    edges.push_back(json::array({node_to_json(src), node_to_json(dst)}));
  doc["edges"] = std::move(edges);
  doc["attacker"] = "A";
  doc["target"] = sc.target_id;
  json catalog;
  for (const auto& [os_name, vulns] : sc.os_catalog) {
    json list = json::array();
    for (const Vulnerability& v : vulns) list.push_back(vulnerability_to_json(v));
    catalog[os_name] = std::move(list);
  }
  doc["os_catalog"] = std::move(catalog);
  json backups = json::array();
  for (const BackupOs& b : sc.backups) backups.push_back(backup_to_json(b));
  doc["backups"] = std::move(backups);
  return doc.dump(2) + "\n";
}

ScenarioDescription load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("scenario not found: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return scenario_from_json(buffer.str());
}

void save_scenario(const ScenarioDescription& scenario,
                   const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write scenario: " + path.string());
  out << scenario_to_json(scenario);
  if (!out) throw IoError("cannot write scenario: " + path.string());
}

ScenarioDescription ehealth_scenario() {
  ScenarioDescription sc;
  sc.name = "ehealth";
  sc.description =
      "Private e-health cloud: 10 VMs across 5 hosts; vm1/vm2 are the entry "
      "points and vm10 fronts the patient-record database.";

  for (NodeId id = 1; id <= 10; ++id) {
    VmNode vm;
    vm.id = id;
    vm.aro = 1.0;
    if (id <= 5) {
      vm.os_name = "win10";
      vm.asset_value = 500.0;
    } else {
      vm.os_name = "linux";
      vm.asset_value = id == 10 ? 10000.0 : 480.0;
    }
    sc.vms.push_back(std::move(vm));
  }

  const NodeId a = kAttackerId;
  sc.edges = {{a, 1}, {a, 2}, {1, 3}, {1, 4}, {2, 4}, {2, 5},
              {3, 5}, {3, 6}, {4, 5}, {4, 6}, {5, 7}, {5, 9},
              {6, 8}, {6, 9}, {7, 6}, {7, 9}, {8, 10}, {9, 10}};
  sc.target_id = 10;

  sc.os_catalog["win10"] = win10_profile();
  sc.os_catalog["linux"] = linux_profile();
  sc.os_catalog["fedora"] = fedora_profile();

  sc.backups = {
      make_backup(1, "HP-UX 11i", 0.55, 55.0, 450.0, 4),
      make_backup(2, "Win 8", 0.53, 65.0, 490.0, 4),
      make_backup(3, "Solaris", 0.51, 80.0, 550.0, 3),
      make_backup(4, "Win XP", 0.49, 100.0, 590.0, 3),
      make_backup(5, "CentOS", 0.47, 120.0, 620.0, 2),
      make_backup(6, "OpenBSD", 0.45, 150.0, 680.0, 1),
      make_backup(7, "Win Server 2008", 0.43, 200.0, 690.0, 1),
  };
  return sc;
}

BackupOs make_variant_from_catalog(const ScenarioDescription& scenario,
                                   const std::string& os_name, double asset_value,
                                   double cost_of_security) {
  auto it = scenario.os_catalog.find(os_name);
  if (it == scenario.os_catalog.end())
    throw ModelError("unknown variant os '" + os_name + "'");
  BackupOs variant;
  variant.name = os_name;
  variant.asset_value = asset_value;
  variant.cost_of_security = cost_of_security;
  variant.vuln_count = static_cast<int>(it->second.size());
  double max_ef = 0.0;
  for (const Vulnerability& v : it->second)
    max_ef = std::max(max_ef, v.exposure_factor);
  variant.exposure_factor = max_ef;
  variant.vulnerabilities = it->second;
  return variant;
}

ScenarioDescription cloudband_generator(int n_per_band, int bands, int degree,
                                        std::uint64_t seed) {
  if (n_per_band < 1) throw ModelError("n_per_band must be >= 1");
  if (bands < 1) throw ModelError("bands must be >= 1");
  if (degree < 1) throw ModelError("degree must be >= 1");
  if (degree > n_per_band)
    throw ModelError("degree " + std::to_string(degree) + " exceeds band size " +
                     std::to_string(n_per_band));

  ScenarioDescription sc;
  sc.name = "cloudband";
  {
    std::ostringstream desc;
    desc << "Generated cloud-band: " << bands << " band(s) of " << n_per_band
         << " VMs, out-degree " << degree << ", seed " << seed << ".";
    sc.description = desc.str();
  }
  sc.os_catalog["win10"] = win10_profile();
  sc.os_catalog["linux"] = linux_profile();
  sc.os_catalog["fedora"] = fedora_profile();
  sc.backups = ehealth_scenario().backups;

  const NodeId resource_id = bands * n_per_band + 1;
  const NodeId db_id = bands * n_per_band + 2;
  auto band_vm = [n_per_band](int band, int pos) {
    return (band - 1) * n_per_band + pos + 1;  // band is 1-based, pos 0-based
  };

  for (int band = 1; band <= bands; ++band) {
    const bool windows = band % 2 == 1;
    for (int pos = 0; pos < n_per_band; ++pos) {
      VmNode vm;
      vm.id = band_vm(band, pos);
      vm.os_name = windows ? "win10" : "linux";
      vm.asset_value = windows ? 500.0 : 480.0;
      sc.vms.push_back(std::move(vm));
    }
  }
  VmNode resource;
  resource.id = resource_id;
  resource.os_name = "linux";
  resource.asset_value = 480.0;
  sc.vms.push_back(resource);
  VmNode db;
  db.id = db_id;
  db.os_name = "linux";
  db.asset_value = 10000.0;
  sc.vms.push_back(db);
  sc.target_id = db_id;

  std::set<std::pair<NodeId, NodeId>> edges;
  for (int pos = 0; pos < n_per_band; ++pos)
    edges.emplace(kAttackerId, band_vm(1, pos));

  // One guaranteed forward edge per VM keeps every VM on a path and the
  // graph acyclic; extra edges only point to later ids.
  Xoshiro256 rng(seed);
  for (int band = 1; band <= bands; ++band) {
    for (int pos = 0; pos < n_per_band; ++pos) {
      const NodeId src = band_vm(band, pos);
      const NodeId forward =
          band < bands ? band_vm(band + 1, pos) : resource_id;
      edges.emplace(src, forward);

      std::vector<NodeId> candidates;
      for (int later = pos + 1; later < n_per_band; ++later)
        candidates.push_back(band_vm(band, later));
      if (band < bands) {
        for (int nxt = 0; nxt < n_per_band; ++nxt) {
          if (nxt != pos) candidates.push_back(band_vm(band + 1, nxt));
        }
      }
      for (int extra = 0; extra < degree - 1 && !candidates.empty(); ++extra) {
        const std::size_t pick =
            static_cast<std::size_t>(rng.below(candidates.size()));
        edges.emplace(src, candidates[pick]);
        candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(pick));
      }
    }
  }
  edges.emplace(resource_id, db_id);
  sc.edges.assign(edges.begin(), edges.end());
  return sc;
}

}  // namespace mtdbench
