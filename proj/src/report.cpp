// Copyright 2026 The invsim Authors
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

// Run reports. The per-warehouse CSVs are the only source: every HTML figure
// and the recomputed metric are read back from them.

#include <fstream>
#include <json.hpp>
#include <map>
#include <sstream>

#include "invsim/csv.hpp"
#include "invsim/error.hpp"
#include "invsim/harness.hpp"

namespace invsim {

namespace {

const std::vector<std::string> kColumns = {
    "t",        "sku_id",      "demand",        "sale",       "arrival",      "received",
    "order",    "overflow",    "inventory",     "in_transit", "income",       "procurement",
    "overflow_cost", "order_cost", "holding_cost", "backlog_cost", "profit",
};
constexpr std::size_t kFirstNumeric = 2;

std::ofstream open_or_throw(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

std::string read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string html_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

const char* kStyle =
    "<style>body{font-family:sans-serif;margin:1.5em}table{border-collapse:collapse;font-size:12px}"
    "td,th{border:1px solid #ccc;padding:2px 6px;text-align:right}th{background:#eee;position:sticky;top:0}"
    "tr.total td{font-weight:bold;background:#f6f6d8}td.id{text-align:left}</style>";

}  // namespace

std::vector<std::string> report_columns() { return kColumns; }

std::filesystem::path warehouse_csv_path(const std::filesystem::path& dir, int warehouse) {
  return dir / ("warehouse_" + std::to_string(warehouse) + ".csv");
}

ReportWriter::ReportWriter(const std::filesystem::path& dir, const SeriesSet& series, int echelons)
    : series_(&series) {
  std::filesystem::create_directories(dir);
  for (int i = 0; i < echelons; ++i) {
    auto f = std::make_unique<std::ofstream>(warehouse_csv_path(dir, i), std::ios::binary);
    if (!*f) throw ConfigError("cannot write " + warehouse_csv_path(dir, i).string());
    for (std::size_t c = 0; c < kColumns.size(); ++c) *f << (c ? "," : "") << kColumns[c];
    *f << '\n';
    files_.push_back(std::move(f));
  }
}

void ReportWriter::add(const StepRecord& r) {
  std::string line;
  for (std::size_t i = 0; i < files_.size(); ++i) {
    std::string block;
    for (int j = 0; j < r.demand.cols(); ++j) {
      line.clear();
      line += std::to_string(r.t);
      line += ',';
      line += csv::escape(series_->sku_id(j));
      for (Quantity q : {r.demand(i, j), r.sale(i, j), r.arrival(i, j), r.received(i, j), r.order(i, j),
                         r.overflow(i, j), r.inventory(i, j), r.in_transit(i, j)}) {
        line += ',';
        line += std::to_string(q);
      }
      for (Money v : {r.income(i, j), r.procurement(i, j), r.overflow_cost(i, j), r.order_cost(i, j),
                      r.holding_cost(i, j), r.backlog_cost(i, j), r.profit(i, j)}) {
        line += ',';
        line += v.to_string();
      }
      line += '\n';
      block += line;
    }
    *files_[i] << block;
  }
}

void ReportWriter::close() {
  for (auto& f : files_) {
    f->flush();
    if (!*f) throw ConfigError("failed writing report CSV");
    f->close();
  }
}

void write_run_json(const RunResult& run, const std::filesystem::path& dir) {
  nlohmann::ordered_json j;
  j["task"] = run.task;
  j["policy"] = run.policy;
  j["split"] = to_string(run.split);
  j["seed"] = run.seed;
  j["range"] = {run.range.begin, run.range.end};
  j["steps"] = run.range.length();
  j["echelons"] = run.echelons;
  j["skus"] = run.skus;
  j["agents"] = run.agents();
  j["total_profit"] = run.total_profit.to_string();
  j["metric"] = run.metric.to_string();
  j["wall_seconds"] = run.wall_seconds;
  j["peak_bytes"] = run.peak_bytes;
  auto out = open_or_throw(dir / "run.json");
  out << j.dump(2) << '\n';
}

void emit_report(const RunResult& run, const SeriesSet& series, const std::filesystem::path& out_dir,
                 std::size_t html_max_rows) {
  if (run.records.empty() && run.range.length() > 0) {
    throw ConfigError("emit_report needs a run made with keep_records");
  }
  ReportWriter writer(out_dir, series, run.echelons);
  for (const StepRecord& r : run.records) writer.add(r);
  writer.close();
  write_run_json(run, out_dir);
  regenerate_report(out_dir, html_max_rows);
}

namespace {

struct SkuAudit {
  Money gmv;
  Money holding;
};

// Streams one warehouse CSV: validates the header, sums numeric columns and
// optionally hands each row to `visit`.
template <typename Visit>
WarehouseTotals scan_csv(const std::filesystem::path& path, Visit visit) {
  const std::vector<csv::Row> rows = csv::parse(read_all(path));
  if (rows.empty() || rows[0] != kColumns) throw DataError(path.string() + ": unexpected header");
  WarehouseTotals totals;
  totals.columns.assign(kColumns.begin() + kFirstNumeric, kColumns.end());
  totals.sums.assign(totals.columns.size(), Money{});
  std::vector<Money> values(totals.columns.size());
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const csv::Row& row = rows[r];
    if (row.size() != kColumns.size()) throw DataError(path.string() + ": ragged row " + std::to_string(r), r);
    for (std::size_t c = kFirstNumeric; c < kColumns.size(); ++c) {
      try {
        values[c - kFirstNumeric] = Money::parse(row[c]);
      } catch (const std::invalid_argument&) {
        throw DataError(path.string() + ": row " + std::to_string(r) + ", column '" + kColumns[c] + "'", r,
                        kColumns[c]);
      }
      totals.sums[c - kFirstNumeric] += values[c - kFirstNumeric];
    }
    visit(row, values);
  }
  totals.rows = rows.size() - 1;
  return totals;
}

std::size_t column_index(const std::string& name) {
  for (std::size_t c = kFirstNumeric; c < kColumns.size(); ++c) {
    if (kColumns[c] == name) return c - kFirstNumeric;
  }
  return 0;
}

nlohmann::json read_run_json(const std::filesystem::path& dir) {
  try {
    return nlohmann::json::parse(read_all(dir / "run.json"));
  } catch (const nlohmann::json::exception& e) {
    throw DataError((dir / "run.json").string() + ": " + e.what());
  }
}

void totals_row(std::ostream& out, const WarehouseTotals& t, const char* label) {
  out << "<tr class=\"total\"><td class=\"id\" colspan=\"2\">" << label << "</td>";
  for (Money v : t.sums) out << "<td>" << v.to_string() << "</td>";
  out << "</tr>\n";
}

}  // namespace

ReportSummary summarize_report(const std::filesystem::path& dir, int agents) {
  ReportSummary summary;
  summary.agents = agents;
  for (int i = 0; std::filesystem::exists(warehouse_csv_path(dir, i)); ++i) {
    summary.warehouses.push_back(scan_csv(warehouse_csv_path(dir, i), [](const csv::Row&, const std::vector<Money>&) {}));
    summary.total_profit += summary.warehouses.back().sums[column_index("profit")];
  }
  if (summary.warehouses.empty()) throw DataError("no warehouse CSVs in " + dir.string());
  summary.metric = metric_from_total(summary.total_profit, agents);
  return summary;
}

ReportSummary regenerate_report(const std::filesystem::path& dir, std::size_t html_max_rows) {
  const nlohmann::json meta = read_run_json(dir);
  const int agents = meta.at("agents").get<int>();
  const int echelons = meta.at("echelons").get<int>();
  const std::string title = meta.at("task").get<std::string>() + " / " + meta.at("policy").get<std::string>() +
                            " / " + meta.at("split").get<std::string>() + " / seed " +
                            std::to_string(meta.at("seed").get<std::uint64_t>());

  ReportSummary summary;
  summary.agents = agents;
  auto audit_out = open_or_throw(dir / "sku_audit.csv");
  audit_out << "warehouse,sku_id,gmv,holding_cost,holding_share_of_gmv\n";

  for (int i = 0; i < echelons; ++i) {
    const auto csv_path = warehouse_csv_path(dir, i);
    // Pass 1: totals and per-SKU audit figures.
    std::map<std::string, SkuAudit> audit;
    std::vector<std::string> order;
    const std::size_t income = column_index("income");
    const std::size_t holding = column_index("holding_cost");
    WarehouseTotals totals = scan_csv(csv_path, [&](const csv::Row& row, const std::vector<Money>& v) {
      auto [it, fresh] = audit.try_emplace(row[1]);
      if (fresh) order.push_back(row[1]);
      it->second.gmv += v[income];
      it->second.holding += v[holding];
    });
    for (const std::string& id : order) {
      const SkuAudit& a = audit[id];
      audit_out << i << ',' << csv::escape(id) << ',' << a.gmv.to_string() << ',' << a.holding.to_string() << ',';
      if (a.gmv > Money{}) {
        audit_out << Money::from_raw(Money::round_div(static_cast<__int128>(a.holding.raw()) * Money::kScale,
                                                      a.gmv.raw()))
                         .to_string();
      }
      audit_out << '\n';
    }

    // Pass 2: the page itself.
    auto page = open_or_throw(dir / ("warehouse_" + std::to_string(i) + ".html"));
    page << "<!doctype html><html><head><meta charset=\"utf-8\"><title>Warehouse " << i << "</title>" << kStyle
         << "</head><body>\n<h1>Warehouse " << i << "</h1>\n<p>" << html_escape(title) << "</p>\n"
         << "<p><a href=\"index.html\">summary</a> &middot; <a href=\"warehouse_" << i << ".csv\">CSV</a></p>\n";
    const std::size_t shown = html_max_rows == 0 ? totals.rows : std::min(totals.rows, html_max_rows);
    if (shown < totals.rows) {
      page << "<p>First " << shown << " of " << totals.rows << " rows shown; the CSV holds all of them. "
           << "Totals cover every row.</p>\n";
    }
    page << "<table><thead><tr>";
    for (const auto& c : kColumns) page << "<th>" << c << "</th>";
    page << "</tr></thead><tbody>\n";
    totals_row(page, totals, "total");
    std::size_t written = 0;
    scan_csv(csv_path, [&](const csv::Row& row, const std::vector<Money>&) {
      if (written++ >= shown) return;
      page << "<tr><td>" << html_escape(row[0]) << "</td><td class=\"id\">" << html_escape(row[1]) << "</td>";
      for (std::size_t c = kFirstNumeric; c < row.size(); ++c) page << "<td>" << html_escape(row[c]) << "</td>";
      page << "</tr>\n";
    });
    page << "</tbody></table></body></html>\n";

    summary.total_profit += totals.sums[column_index("profit")];
    summary.warehouses.push_back(std::move(totals));
  }
  summary.metric = metric_from_total(summary.total_profit, agents);

  auto index = open_or_throw(dir / "index.html");
  index << "<!doctype html><html><head><meta charset=\"utf-8\"><title>Run summary</title>" << kStyle
        << "</head><body>\n<h1>Run summary</h1>\n<p>" << html_escape(title) << "</p>\n<table>"
        << "<tr><th>steps</th><td>" << meta.at("steps").get<Step>() << "</td></tr>"
        << "<tr><th>agents</th><td>" << agents << "</td></tr>"
        << "<tr><th>total profit</th><td>" << summary.total_profit.to_string() << "</td></tr>"
        << "<tr><th>metric (total profit / agents)</th><td>" << summary.metric.to_string() << "</td></tr>"
        << "</table>\n<h2>Warehouses</h2>\n<table><thead><tr><th>warehouse</th><th>rows</th>";
  for (std::size_t c = kFirstNumeric; c < kColumns.size(); ++c) index << "<th>" << kColumns[c] << "</th>";
  index << "</tr></thead><tbody>\n";
  for (int i = 0; i < echelons; ++i) {
    const WarehouseTotals& t = summary.warehouses[i];
    index << "<tr><td class=\"id\"><a href=\"warehouse_" << i << ".html\">" << i << "</a></td><td>" << t.rows
          << "</td>";
    for (Money v : t.sums) index << "<td>" << v.to_string() << "</td>";
    index << "</tr>\n";
  }
  index << "</tbody></table>\n<p><a href=\"sku_audit.csv\">per-SKU GMV and holding-cost share</a></p>\n"
        << "</body></html>\n";
  return summary;
}

}  // namespace invsim
