// Copyright 2026 The Mercury Mini Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mercury/catalog/catalog.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mercury/common/error.h"

namespace mercury {

using nlohmann::json;

std::shared_ptr<const CatalogState> Catalog::Snapshot() const {
  std::lock_guard lock(mu_);
  return state_;
}

template <typename Fn>
void Catalog::Mutate(Fn&& fn) {
  std::lock_guard lock(mu_);
  auto next = std::make_shared<CatalogState>(*state_);
  fn(*next);
  state_ = std::move(next);
}

void Catalog::AddTable(const TableSchema& schema) {
  ValidateSchema(schema);
  Mutate([&](CatalogState& s) {
    if (s.tables.count(schema.name) || s.mviews.count(schema.name)) {
      throw Error(ErrorCode::kDuplicateName, "name already in use: " + schema.name);
    }
    s.tables.emplace(schema.name, schema);
    s.generations[schema.name] = 0;
  });
}

void Catalog::DropTable(const std::string& name) {
  Mutate([&](CatalogState& s) {
    if (!s.tables.count(name)) throw Error(ErrorCode::kUnknownBaseTable, name);
    for (const auto& [_, mv] : s.mviews) {
      if (mv.base_table == name) {
        throw Error(ErrorCode::kDependentViews, "materialized view " + mv.name + " depends on " + name);
      }
    }
    s.tables.erase(name);
    s.mlog_tables.erase(name);
    s.generations.erase(name);
  });
}

void Catalog::DropMView(const std::string& name) {
  Mutate([&](CatalogState& s) {
    if (!s.mviews.erase(name)) throw Error(ErrorCode::kUnknownMView, name);
  });
}

void Catalog::AddMView(const MViewDef& def) {
  Mutate([&](CatalogState& s) {
    auto base = s.tables.find(def.base_table);
    if (base == s.tables.end()) throw Error(ErrorCode::kUnknownBaseTable, def.base_table);
    if (s.tables.count(def.name) || s.mviews.count(def.name)) {
      throw Error(ErrorCode::kDuplicateName, "name already in use: " + def.name);
    }
    ValidateMView(def, base->second);
    if (def.refresh_policy == RefreshPolicy::kIncremental && !s.mlog_tables.count(def.base_table)) {
      throw Error(ErrorCode::kMissingMlog, "incremental view " + def.name + " needs a materialized view log on " +
                                               def.base_table);
    }
    s.mviews.emplace(def.name, def);
  });
}

void Catalog::EnableMlog(const std::string& table) {
  Mutate([&](CatalogState& s) {
    if (!s.tables.count(table)) throw Error(ErrorCode::kUnknownBaseTable, table);
    s.mlog_tables.insert(table);
  });
}

void Catalog::SetGeneration(const std::string& table, uint64_t generation) {
  Mutate([&](CatalogState& s) { s.generations[table] = generation; });
}

TableSchema Catalog::GetTable(const std::string& name) const {
  auto s = Snapshot();
  auto it = s->tables.find(name);
  if (it == s->tables.end()) throw Error(ErrorCode::kUnknownBaseTable, name);
  return it->second;
}

MViewDef Catalog::GetMView(const std::string& name) const {
  auto s = Snapshot();
  auto it = s->mviews.find(name);
  if (it == s->mviews.end()) throw Error(ErrorCode::kUnknownMView, name);
  return it->second;
}

bool Catalog::HasTable(const std::string& name) const { return Snapshot()->tables.count(name) > 0; }
bool Catalog::HasMView(const std::string& name) const { return Snapshot()->mviews.count(name) > 0; }
bool Catalog::MlogEnabled(const std::string& table) const { return Snapshot()->mlog_tables.count(table) > 0; }

uint64_t Catalog::Generation(const std::string& table) const {
  auto s = Snapshot();
  auto it = s->generations.find(table);
  if (it == s->generations.end()) throw Error(ErrorCode::kUnknownBaseTable, table);
  return it->second;
}

std::vector<MViewDef> Catalog::DependentMViews(const std::string& table) const {
  std::vector<MViewDef> out;
  for (const auto& [_, mv] : Snapshot()->mviews) {
    if (mv.base_table == table) out.push_back(mv);
  }
  return out;
}

namespace {

json ColumnToJson(const ColumnDef& c) {
  return {{"name", c.name}, {"type", DataTypeName(c.type)}, {"nullable", c.nullable}};
}

json SchemaToJsonValue(const TableSchema& schema) {
  json cols = json::array();
  for (const auto& c : schema.columns) cols.push_back(ColumnToJson(c));
  return {{"name", schema.name}, {"columns", cols}, {"pk", schema.pk}, {"store_mode", StoreModeName(schema.store_mode)}};
}

json MViewToJsonValue(const MViewDef& def) {
  json items = json::array();
  for (const auto& a : def.select_items) {
    json item = {{"function", AggFuncName(a.function)}, {"output_name", a.output_name}};
    item["column"] = a.column ? json(*a.column) : json(nullptr);
    items.push_back(item);
  }
  return {{"name", def.name},
          {"base_table", def.base_table},
          {"kind", def.kind},
          {"select_items", items},
          {"group_by", def.group_by},
          {"refresh_policy", RefreshPolicyName(def.refresh_policy)}};
}

template <typename T>
T Require(std::optional<T> v, const std::string& what) {
  if (!v) throw Error(ErrorCode::kCorruption, "bad catalog field: " + what);
  return *v;
}

json ParseJson(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kCorruption, std::string("catalog json: ") + e.what());
  }
}

std::string ReadFile(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::filesystem::path& p, const std::string& text) {
  auto tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoError, "cannot write " + tmp.string());
    out << text;
  }
  std::filesystem::rename(tmp, p);
}

}  // namespace

std::string TableSchemaToJson(const TableSchema& schema) { return SchemaToJsonValue(schema).dump(2); }

TableSchema TableSchemaFromJson(const std::string& text) {
  try {
    json j = ParseJson(text);
    TableSchema s;
    s.name = j.at("name").get<std::string>();
    for (const auto& c : j.at("columns")) {
      s.columns.push_back({c.at("name").get<std::string>(),
                           Require(ParseDataType(c.at("type").get<std::string>()), "type"),
                           c.at("nullable").get<bool>()});
    }
    s.pk = j.at("pk").get<std::vector<std::string>>();
    s.store_mode = Require(ParseStoreMode(j.at("store_mode").get<std::string>()), "store_mode");
    return s;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kCorruption, std::string("table json: ") + e.what());
  }
}

std::string MViewDefToJson(const MViewDef& def) { return MViewToJsonValue(def).dump(2); }

MViewDef MViewDefFromJson(const std::string& text) {
  try {
    json j = ParseJson(text);
    MViewDef d;
    d.name = j.at("name").get<std::string>();
    d.base_table = j.at("base_table").get<std::string>();
    d.kind = j.at("kind").get<std::string>();
    for (const auto& item : j.at("select_items")) {
      AggSpec a;
      a.function = Require(ParseAggFunc(item.at("function").get<std::string>()), "function");
      if (!item.at("column").is_null()) a.column = item.at("column").get<std::string>();
      a.output_name = item.at("output_name").get<std::string>();
      d.select_items.push_back(std::move(a));
    }
    d.group_by = j.at("group_by").get<std::vector<std::string>>();
    d.refresh_policy = Require(ParseRefreshPolicy(j.at("refresh_policy").get<std::string>()), "refresh_policy");
    return d;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kCorruption, std::string("mview json: ") + e.what());
  }
}

void Catalog::Save(const std::filesystem::path& dir) const {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto s = Snapshot();
  std::set<std::string> keep;
  for (const auto& [name, schema] : s->tables) {
    std::string file = name + ".table.json";
    WriteFile(dir / file, TableSchemaToJson(schema));
    keep.insert(file);
  }
  for (const auto& [name, def] : s->mviews) {
    std::string file = name + ".mview.json";
    WriteFile(dir / file, MViewDefToJson(def));
    keep.insert(file);
  }
  for (const auto& table : s->mlog_tables) {
    std::string file = table + ".mlog.json";
    WriteFile(dir / file, json({{"base_table", table}}).dump(2));
    keep.insert(file);
  }
  for (const auto& entry : fs::directory_iterator(dir)) {
    auto name = entry.path().filename().string();
    if (entry.path().extension() == ".json" && !keep.count(name)) fs::remove(entry.path());
  }
}

void Catalog::Load(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  auto next = std::make_shared<CatalogState>();
  if (fs::exists(dir)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& p : files) {
      std::string name = p.filename().string();
      auto ends_with = [&](std::string_view suffix) {
        return name.size() > suffix.size() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0;
      };
      if (ends_with(".table.json")) {
        auto schema = TableSchemaFromJson(ReadFile(p));
        next->generations[schema.name] = 0;
        next->tables.emplace(schema.name, std::move(schema));
      } else if (ends_with(".mview.json")) {
        auto def = MViewDefFromJson(ReadFile(p));
        next->mviews.emplace(def.name, std::move(def));
      } else if (ends_with(".mlog.json")) {
        next->mlog_tables.insert(ParseJson(ReadFile(p)).at("base_table").get<std::string>());
      }
    }
  }
  std::lock_guard lock(mu_);
  state_ = std::move(next);
}

}  // namespace mercury
