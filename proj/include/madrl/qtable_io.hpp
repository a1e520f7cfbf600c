#pragma once

// Q-table snapshots.
//
//   # madrl-qtables v1
//   # meta <key>=<value>                  (zero or more)
//   # table <name> <state_count> <action_count>   (one per table, in order)
//   table,state,action,value
//   <name>,<state>,<action>,<value>       (tables in declaration order,
//                                          state-major, action-minor)
//
// Values are written with 17 significant digits and read back bit-exactly.

#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "madrl/advisors.hpp"

namespace madrl::advisors {

struct NamedTable {
  std::string name;
  std::shared_ptr<QTable> table;
};

struct Snapshot {
  std::map<std::string, std::string> meta;
  std::vector<NamedTable> tables;

  const QTable& find(const std::string& name) const;
};

void write_snapshot(std::ostream& out, const Snapshot& snap);
Snapshot read_snapshot(std::istream& in);
void save_snapshot(const std::string& path, const Snapshot& snap);
Snapshot load_snapshot(const std::string& path);

}  // namespace madrl::advisors
