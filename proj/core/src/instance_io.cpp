#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "gnep/errors.hpp"
#include "gnep/instances.hpp"

namespace gnep {

namespace {

using json = nlohmann::json;
using PathElem = std::variant<std::string, std::size_t>;
using Path = std::vector<PathElem>;

json number(double v) {
  if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 9.0e15)
    return static_cast<std::int64_t>(v);
  return v;
}

std::string path_string(const Path& path) {
  std::string out;
  for (const auto& e : path) {
    if (const auto* key = std::get_if<std::string>(&e)) {
      if (!out.empty()) out += '.';
      out += *key;
    } else {
      out += '[' + std::to_string(std::get<std::size_t>(e)) + ']';
    }
  }
  return out;
}

/// Maps a JSON path to the line of the deepest element that exists along
/// it. The text is known to be well-formed when this runs.
class Locator {
 public:
  explicit Locator(std::string_view text) : s_(text) {}

  std::size_t line(const Path& path) {
    pos_ = 0;
    const std::size_t at = find(path, 0);
    std::size_t line = 1;
    for (std::size_t i = 0; i < at && i < s_.size(); ++i)
      if (s_[i] == '\n') ++line;
    return line;
  }

 private:
  void ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\n' || s_[pos_] == '\r' || s_[pos_] == '\t'))
      ++pos_;
  }

  std::string read_string() {
    std::string out;
    ++pos_;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      if (s_[pos_] == '\\') ++pos_;
      if (pos_ < s_.size()) out += s_[pos_++];
    }
    ++pos_;
    return out;
  }

  void skip_value() {
    ws();
    if (pos_ >= s_.size()) return;
    if (s_[pos_] == '"') {
      read_string();
      return;
    }
    if (s_[pos_] == '{' || s_[pos_] == '[') {
      int depth = 0;
      while (pos_ < s_.size()) {
        const char c = s_[pos_];
        if (c == '"') {
          read_string();
          continue;
        }
        if (c == '{' || c == '[') ++depth;
        if (c == '}' || c == ']') --depth;
        ++pos_;
        if (depth == 0) return;
      }
      return;
    }
    while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != '}' && s_[pos_] != ']') ++pos_;
  }

  std::size_t find(const Path& path, std::size_t depth) {
    ws();
    const std::size_t here = pos_;
    if (depth == path.size() || pos_ >= s_.size()) return here;
    if (const auto* key = std::get_if<std::string>(&path[depth]); key && s_[pos_] == '{') {
      ++pos_;
      while (true) {
        ws();
        if (pos_ >= s_.size() || s_[pos_] == '}') return here;
        const std::size_t key_pos = pos_;
        const std::string k = read_string();
        ws();
        ++pos_;  // ':'
        if (k == *key) {
          const std::size_t inner = find(path, depth + 1);
          return depth + 1 == path.size() ? key_pos : inner;
        }
        skip_value();
        ws();
        if (pos_ < s_.size() && s_[pos_] == ',') ++pos_;
      }
    }
    if (const auto* idx = std::get_if<std::size_t>(&path[depth]); idx && s_[pos_] == '[') {
      ++pos_;
      for (std::size_t i = 0;; ++i) {
        ws();
        if (pos_ >= s_.size() || s_[pos_] == ']') return here;
        if (i == *idx) return find(path, depth + 1);
        skip_value();
        ws();
        if (pos_ < s_.size() && s_[pos_] == ',') ++pos_;
      }
    }
    return here;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

class Reader {
 public:
  explicit Reader(std::string_view text) : locator_(text) {}

  [[noreturn]] void fail(const Path& path, const std::string& message) {
    throw ParseError(path_string(path), locator_.line(path), message);
  }

  const json& field(const json& obj, const Path& path, const std::string& key) {
    Path p = path;
    p.emplace_back(key);
    if (!obj.is_object()) fail(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(p, "missing field");
    return *it;
  }

  double num(const json& v, const Path& path) {
    if (!v.is_number()) fail(path, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(path, "number is not finite");
    return d;
  }

  std::size_t index(const json& v, const Path& path) {
    if (v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0))
      return v.get<std::size_t>();
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (d >= 0 && d == std::floor(d)) return static_cast<std::size_t>(d);
    }
    fail(path, "expected a nonnegative integer");
  }

  const json& array(const json& v, const Path& path) {
    if (!v.is_array()) fail(path, "expected an array");
    return v;
  }

 private:
  Locator locator_;
};

Path extend(const Path& base, PathElem e) {
  Path p = base;
  p.push_back(std::move(e));
  return p;
}

}  // namespace

std::string serialize_instance(const GnepInstance& instance) {
  std::vector<std::size_t> offsets;
  for (std::size_t i = 0; i < instance.num_players(); ++i) offsets.push_back(instance.offset(i));
  auto local = [&](std::size_t var) {
    const std::size_t p = instance.owner_of(var);
    return std::pair<std::size_t, std::size_t>{p, var - offsets[p]};
  };

  json players = json::array();
  for (const auto& p : instance.players) {
    json lb = json::array(), ub = json::array();
    for (double v : p.lower) lb.push_back(number(v));
    for (double v : p.upper) ub.push_back(number(v));
    players.push_back({{"k", p.k}, {"l", p.l}, {"lb", lb}, {"ub", ub}});
  }
  json constraints = json::array();
  for (const auto& row : instance.constraints) {
    json coeffs = json::array();
    for (const auto& t : row.terms) {
      const auto [p, j] = local(t.var);
      coeffs.push_back({p, j, number(t.coeff)});
    }
    constraints.push_back({{"owner", row.owner}, {"coeffs", coeffs}, {"rhs", number(row.rhs)}});
  }
  json objectives = json::array();
  for (const auto& obj : instance.objectives) {
    json linear = json::array(), bilinear = json::array();
    for (const auto& t : obj.linear) {
      const auto [p, j] = local(t.var);
      linear.push_back({p, j, number(t.coeff)});
    }
    for (const auto& b : obj.bilinear) {
      const auto [pa, ja] = local(b.a);
      const auto [pb, jb] = local(b.b);
      bilinear.push_back({pa, ja, pb, jb, number(b.coeff)});
    }
    objectives.push_back(
        {{"constant", number(obj.constant)}, {"linear", linear}, {"bilinear", bilinear}});
  }
  json meta = instance.meta.is_object() ? instance.meta : json::object();
  meta["standard_nep"] = instance.standard_nep();
  json doc = {{"family", instance.family},   {"n", instance.num_players()},
              {"players", players},          {"constraints", constraints},
              {"objectives", objectives},    {"meta", meta}};
  return doc.dump(2) + "\n";
}

GnepInstance parse_instance(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i)
      if (text[i] == '\n') ++line;
    throw ParseError("", line, e.what());
  }

  Reader rd(text);
  const Path root;
  GnepInstance inst;
  const json& family = rd.field(doc, root, "family");
  if (!family.is_string()) rd.fail({std::string("family")}, "expected a string");
  inst.family = family.get<std::string>();
  const std::size_t n = rd.index(rd.field(doc, root, "n"), {std::string("n")});

  const Path pp{std::string("players")};
  const json& players = rd.array(rd.field(doc, root, "players"), pp);
  if (players.size() != n) rd.fail(pp, "expected " + std::to_string(n) + " players");
  for (std::size_t i = 0; i < players.size(); ++i) {
    const Path base = extend(pp, i);
    PlayerSpec spec;
    spec.k = rd.index(rd.field(players[i], base, "k"), extend(base, std::string("k")));
    spec.l = rd.index(rd.field(players[i], base, "l"), extend(base, std::string("l")));
    for (const char* key : {"lb", "ub"}) {
      const Path bp = extend(base, std::string(key));
      const json& arr = rd.array(rd.field(players[i], base, key), bp);
      if (arr.size() != spec.size()) rd.fail(bp, "expected k + l entries");
      auto& out = std::string(key) == "lb" ? spec.lower : spec.upper;
      for (std::size_t j = 0; j < arr.size(); ++j) out.push_back(rd.num(arr[j], extend(bp, j)));
    }
    inst.players.push_back(std::move(spec));
  }

  auto global = [&](const json& p, const json& j, const Path& at) {
    const std::size_t player = rd.index(p, at);
    if (player >= inst.players.size()) rd.fail(at, "player index out of range");
    const std::size_t local = rd.index(j, at);
    if (local >= inst.players[player].size()) rd.fail(at, "local index out of range");
    return inst.offset(player) + local;
  };
  auto read_terms = [&](const json& arr, const Path& at) {
    std::vector<Term> terms;
    rd.array(arr, at);
    for (std::size_t t = 0; t < arr.size(); ++t) {
      const Path tp = extend(at, t);
      if (!arr[t].is_array() || arr[t].size() != 3) rd.fail(tp, "expected [player, index, coeff]");
      terms.push_back({global(arr[t][0], arr[t][1], tp), rd.num(arr[t][2], tp)});
    }
    return terms;
  };

  const Path cp{std::string("constraints")};
  const json& constraints = rd.array(rd.field(doc, root, "constraints"), cp);
  for (std::size_t r = 0; r < constraints.size(); ++r) {
    const Path base = extend(cp, r);
    ConstraintRow row;
    const Path op = extend(base, std::string("owner"));
    row.owner = rd.index(rd.field(constraints[r], base, "owner"), op);
    if (row.owner >= n) rd.fail(op, "owner out of range");
    row.terms = read_terms(rd.field(constraints[r], base, "coeffs"), extend(base, std::string("coeffs")));
    row.rhs = rd.num(rd.field(constraints[r], base, "rhs"), extend(base, std::string("rhs")));
    inst.constraints.push_back(std::move(row));
  }

  const Path objp{std::string("objectives")};
  const json& objectives = rd.array(rd.field(doc, root, "objectives"), objp);
  if (objectives.size() != n) rd.fail(objp, "expected one objective per player");
  for (std::size_t i = 0; i < objectives.size(); ++i) {
    const Path base = extend(objp, i);
    CostFunction cost;
    cost.constant = rd.num(rd.field(objectives[i], base, "constant"), extend(base, std::string("constant")));
    cost.linear = read_terms(rd.field(objectives[i], base, "linear"), extend(base, std::string("linear")));
    const Path bp = extend(base, std::string("bilinear"));
    const json& bil = rd.array(rd.field(objectives[i], base, "bilinear"), bp);
    for (std::size_t t = 0; t < bil.size(); ++t) {
      const Path tp = extend(bp, t);
      if (!bil[t].is_array() || bil[t].size() != 5)
        rd.fail(tp, "expected [playerA, indexA, playerB, indexB, coeff]");
      cost.bilinear.push_back({global(bil[t][0], bil[t][1], tp), global(bil[t][2], bil[t][3], tp),
                               rd.num(bil[t][4], tp)});
    }
    inst.objectives.push_back(std::move(cost));
  }

  const Path mp{std::string("meta")};
  inst.meta = rd.field(doc, root, "meta");
  if (!inst.meta.is_object()) rd.fail(mp, "expected an object");

  try {
    inst.validate();
  } catch (const std::invalid_argument& e) {
    rd.fail(root, e.what());
  }
  if (inst.meta.contains("standard_nep")) {
    const json& flag = inst.meta.at("standard_nep");
    const Path fp{std::string("meta"), std::string("standard_nep")};
    if (!flag.is_boolean()) rd.fail(fp, "expected a boolean");
    if (flag.get<bool>() != inst.standard_nep())
      rd.fail(fp, "flag disagrees with the constraint ownership");
  }
  return inst;
}

GnepInstance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("", 0, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

void save_instance(const GnepInstance& instance, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << serialize_instance(instance);
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace gnep
