#include "madrl/qtable_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace madrl::advisors {

namespace {

constexpr const char* kMagic = "# madrl-qtables v1";

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("snapshot: bad number '" + s + "'");
  return v;
}

std::size_t parse_index(const std::string& s) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::invalid_argument("snapshot: bad index '" + s + "'");
  }
  return v;
}

}  // namespace

const QTable& Snapshot::find(const std::string& name) const {
  for (const auto& t : tables) {
    if (t.name == name) return *t.table;
  }
  throw std::out_of_range("snapshot has no table '" + name + "'");
}

void write_snapshot(std::ostream& out, const Snapshot& snap) {
  out << kMagic << '\n';
  for (const auto& [k, v] : snap.meta) out << "# meta " << k << '=' << v << '\n';
  for (const auto& t : snap.tables) {
    out << "# table " << t.name << ' ' << t.table->state_count() << ' ' << t.table->action_count()
        << '\n';
  }
  out << "table,state,action,value\n";
  for (const auto& t : snap.tables) {
    const QTable& q = *t.table;
    for (StateId s = 0; s < q.state_count(); ++s) {
      for (ActionId a = 0; a < q.action_count(); ++a) {
        out << t.name << ',' << s << ',' << a << ',' << format_value(q(s, a)) << '\n';
      }
    }
  }
}

Snapshot read_snapshot(std::istream& in) {
  Snapshot snap;
  std::string line;
  if (!std::getline(in, line) || line != kMagic) throw std::invalid_argument("snapshot: missing header");
  std::map<std::string, std::size_t> by_name;
  while (std::getline(in, line)) {
    if (line.rfind("# meta ", 0) == 0) {
      const auto body = line.substr(7);
      const auto eq = body.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("snapshot: bad meta line");
      snap.meta[body.substr(0, eq)] = body.substr(eq + 1);
    } else if (line.rfind("# table ", 0) == 0) {
      std::istringstream fields(line.substr(8));
      std::string name;
      std::size_t states = 0, actions = 0;
      if (!(fields >> name >> states >> actions)) throw std::invalid_argument("snapshot: bad table line");
      by_name[name] = snap.tables.size();
      snap.tables.push_back({name, std::make_shared<QTable>(states, actions)});
    } else if (line == "table,state,action,value") {
      break;
    } else {
      throw std::invalid_argument("snapshot: unexpected line '" + line + "'");
    }
  }
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string name, s, a, v;
    if (!std::getline(fields, name, ',') || !std::getline(fields, s, ',') ||
        !std::getline(fields, a, ',') || !std::getline(fields, v)) {
      throw std::invalid_argument("snapshot: malformed row '" + line + "'");
    }
    const auto it = by_name.find(name);
    if (it == by_name.end()) throw std::invalid_argument("snapshot: undeclared table '" + name + "'");
    QTable& q = *snap.tables[it->second].table;
    const auto state = parse_index(s);
    const auto action = parse_index(a);
    if (state >= q.state_count() || action >= q.action_count()) {
      throw std::invalid_argument("snapshot: entry outside table bounds");
    }
    q(state, action) = parse_double(v);
    ++rows;
  }
  std::size_t expected = 0;
  for (const auto& t : snap.tables) expected += t.table->values().size();
  if (rows != expected) throw std::invalid_argument("snapshot: table entries are missing");
  return snap;
}

void save_snapshot(const std::string& path, const Snapshot& snap) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write snapshot '" + path + "'");
  write_snapshot(out, snap);
  if (!out) throw std::runtime_error("I/O error while writing '" + path + "'");
}

Snapshot load_snapshot(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open snapshot '" + path + "'");
  return read_snapshot(in);
}

}  // namespace madrl::advisors
