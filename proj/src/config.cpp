#include "mdfc/errors.hpp"
#include "mdfc/harness.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace mdfc {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

double to_number(const std::string& v, int line) {
  try {
    size_t used = 0;
    const double x = std::stod(v, &used);
    if (trim(v.substr(used)).empty()) return x;
  } catch (const std::exception&) {
  }
  throw ConfigError("line " + std::to_string(line) + ": expected a number, got '" + v + "'");
}

int to_int(const std::string& v, int line) {
  const double x = to_number(v, line);
  if (x != static_cast<double>(static_cast<int>(x)))
    throw ConfigError("line " + std::to_string(line) + ": expected an integer, got '" + v + "'");
  return static_cast<int>(x);
}

SideCondition to_side(const std::string& v, int line) {
  std::istringstream in(v);
  std::string kind;
  in >> kind;
  kind = lower(kind);
  std::vector<double> nums;
  std::string tok;
  while (in >> tok) nums.push_back(to_number(tok, line));
  if (kind == "dirichlet" && !nums.empty() && nums.size() <= 3) {
    nums.resize(3, 0.0);
    return SideCondition::pressure(nums[0], nums[1], nums[2]);
  }
  if ((kind == "neumann" || kind == "flux") && nums.size() <= 1) return SideCondition::flux(nums.empty() ? 0.0 : nums[0]);
  throw ConfigError("line " + std::to_string(line) + ": boundary condition must be 'dirichlet a [b c]' or 'neumann g'");
}

}  // namespace

GridKind CaseConfig::grid_kind() const {
  if (grid) return *grid;
  return method == Method::TPFA ? GridKind::CartesianQuads : GridKind::StructuredTriangles;
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    std::istringstream words(item);
    std::string w;
    while (words >> w) out.push_back(to_number(w, 0));
  }
  return out;
}

CaseConfig parse_config(const std::string& text) {
  CaseConfig cfg;
  std::istringstream in(text);
  std::string raw, section;
  int line = 0;
  auto fail = [&](const std::string& msg) { throw ConfigError("line " + std::to_string(line) + ": " + msg); };
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail("unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      static const std::vector<std::string> known = {"case", "matrix", "fractures", "boundary", "convergence", "stability"};
      if (std::find(known.begin(), known.end(), section) == known.end() && section.rfind("fracture.", 0) != 0)
        fail("unknown section [" + section + "]");
      if (section.rfind("fracture.", 0) == 0 && section.size() == 9) fail("fracture section needs a name");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail("expected key = value");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (section.empty()) fail("key '" + key + "' outside a section");
    if (value.empty()) fail("empty value for '" + key + "'");
    auto unknown = [&] { fail("unknown key '" + key + "' in [" + section + "]"); };

    if (section == "case") {
      if (key == "geometry") cfg.geometry = value;
      else if (key == "mesh_file") cfg.mesh_file = value;
      else if (key == "method") {
        try {
          cfg.method = parse_method(lower(value));
        } catch (const std::invalid_argument& e) {
          fail(e.what());
        }
      } else if (key == "grid") {
        const std::string g = lower(value);
        if (g == "quads") cfg.grid = GridKind::CartesianQuads;
        else if (g == "triangles") cfg.grid = GridKind::StructuredTriangles;
        else fail("grid must be quads or triangles");
      } else if (key == "n") cfg.nx = cfg.ny = to_int(value, line);
      else if (key == "nx") cfg.nx = to_int(value, line);
      else if (key == "ny") cfg.ny = to_int(value, line);
      else if (key == "mortar_ratio") cfg.mortar_ratio = to_number(value, line);
      else if (key == "kappa_threshold") cfg.kappa_threshold = to_number(value, line);
      else if (key == "output") cfg.output = value;
      else if (key == "seed") cfg.seed = static_cast<unsigned>(to_int(value, line));
      else unknown();
    } else if (section == "matrix") {
      if (key == "kappa") cfg.kappa_matrix = to_number(value, line);
      else unknown();
    } else if (section == "fractures") {
      if (key == "kappa_perp") cfg.kappa_perp = to_number(value, line);
      else if (key == "kappa_par") cfg.kappa_par = to_number(value, line);
      else if (key == "source") cfg.fracture_source = to_number(value, line);
      else if (key == "kappa_perp_point") cfg.kappa_perp_point = to_number(value, line);
      else unknown();
    } else if (section.rfind("fracture.", 0) == 0) {
      FractureOverride& f = cfg.fractures[section.substr(9)];
      if (key == "kappa_perp") f.kappa_perp = to_number(value, line);
      else if (key == "kappa_par") f.kappa_par = to_number(value, line);
      else if (key == "source") f.source = to_number(value, line);
      else unknown();
    } else if (section == "boundary") {
      if (key == "left") cfg.left = to_side(value, line);
      else if (key == "right") cfg.right = to_side(value, line);
      else if (key == "bottom") cfg.bottom = to_side(value, line);
      else if (key == "top") cfg.top = to_side(value, line);
      else unknown();
    } else if (section == "convergence") {
      if (key == "levels") {
        for (double v : parse_number_list(value)) cfg.levels.push_back(static_cast<int>(v));
      } else if (key == "reference_factor") cfg.reference_factor = to_int(value, line);
      else unknown();
    } else if (section == "stability") {
      if (key == "kperp") cfg.kperp_grid = parse_number_list(value);
      else if (key == "kpar") cfg.kpar_grid = parse_number_list(value);
      else if (key == "ratios") cfg.ratio_grid = parse_number_list(value);
      else unknown();
    }
  }
  if (!(cfg.mortar_ratio > 0.0)) throw ConfigError("mortar_ratio must be positive");
  if (cfg.nx <= 0 || cfg.ny <= 0) throw ConfigError("grid resolution must be positive");
  if (cfg.geometry == "file" && cfg.mesh_file.empty()) throw ConfigError("geometry = file needs mesh_file");
  return cfg;
}

CaseConfig read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace mdfc
