// dialslu/eval/report.cc

// Copyright 2026  dialslu project contributors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dialslu/eval/report.h"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "dialslu/util/errors.h"
#include "dialslu/util/strings.h"

namespace dialslu {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json to_json(const EvalReport& r) {
  ordered_json j;
  j["task"] = r.task;
  j["row_label"] = r.row_label;
  j["input_features"] = r.input_features;
  j["regime"] = r.regime;
  j["wer"] = r.wer;
  j["f1"] = r.f1;
  j["intent_acc"] = r.intent_acc;
  j["conv_intent_acc"] = r.conv_intent_acc;
  j["per_conversation"] = r.per_conversation;
  j["corpus_fingerprint"] = r.corpus_fingerprint;
  j["checkpoint_fingerprint"] = r.checkpoint_fingerprint;
  return j;
}

EvalReport from_json(const ordered_json& j) {
  EvalReport r;
  r.task = j.at("task").get<std::string>();
  r.row_label = j.at("row_label").get<std::string>();
  r.input_features = j.at("input_features").get<std::string>();
  r.regime = j.at("regime").get<std::string>();
  r.wer = j.at("wer").get<double>();
  r.f1 = j.at("f1").get<double>();
  r.intent_acc = j.at("intent_acc").get<double>();
  r.conv_intent_acc = j.at("conv_intent_acc").get<double>();
  r.per_conversation =
      j.at("per_conversation").get<std::map<std::string, double>>();
  r.corpus_fingerprint = j.at("corpus_fingerprint").get<std::string>();
  r.checkpoint_fingerprint = j.at("checkpoint_fingerprint").get<std::string>();
  return r;
}

// "C2" sorts after "C1" and before "C10".
bool row_less(const EvalReport& a, const EvalReport& b) {
  if (a.row_label.size() != b.row_label.size()) {
    return a.row_label.size() < b.row_label.size();
  }
  return a.row_label < b.row_label;
}

std::string pct(double v) {
  if (v < 0) return "-";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", v * 100.0);
  return buf;
}

}  // namespace

void write_reports(const std::string& path,
                   const std::vector<EvalReport>& reports) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path);
  for (const auto& r : reports) os << to_json(r).dump() << "\n";
  if (!os) throw IoError("short write: " + path);
}

std::vector<EvalReport> read_reports(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open: " + path);
  std::vector<EvalReport> out;
  std::string line;
  while (std::getline(is, line)) {
    if (trim(line).empty()) continue;
    out.push_back(from_json(ordered_json::parse(line)));
  }
  return out;
}

void emit_tables(const std::vector<EvalReport>& reports,
                 const std::string& text_path, const std::string& csv_path) {
  if (reports.empty()) {
    throw ConsistencyError("emit_tables: no reports to render");
  }
  for (const auto& r : reports) {
    if (r.corpus_fingerprint != reports.front().corpus_fingerprint) {
      throw ConsistencyError(
          "emit_tables: reports come from different corpora");
    }
  }
  std::vector<EvalReport> rows = reports;
  std::sort(rows.begin(), rows.end(), row_less);

  size_t feat_width = 14;
  for (const auto& r : rows) {
    feat_width = std::max(feat_width, r.input_features.size());
  }

  std::ofstream txt(text_path);
  if (!txt) throw IoError("cannot open for writing: " + text_path);
  const std::string& task = rows.front().task;
  txt << "task: " << task << "   (metrics in %, WER lower is better)\n";
  char header[256];
  std::snprintf(header, sizeof(header), "%-6s %-*s %-9s %7s %7s %7s %9s\n",
                "row", static_cast<int>(feat_width), "input features",
                "regime", "wer", "f1", "acc", "conv-acc");
  txt << header
      << std::string(6 + 1 + feat_width + 1 + 9 + 1 + 7 * 3 + 3 + 9, '-')
      << "\n";
  for (const auto& r : rows) {
    char line[512];
    std::snprintf(line, sizeof(line), "%-6s %-*s %-9s %7s %7s %7s %9s\n",
                  r.row_label.c_str(), static_cast<int>(feat_width),
                  r.input_features.c_str(), r.regime.c_str(),
                  pct(r.wer).c_str(), pct(r.f1).c_str(),
                  pct(r.intent_acc).c_str(), pct(r.conv_intent_acc).c_str());
    txt << line;
  }
  if (!txt) throw IoError("short write: " + text_path);

  std::ofstream csv(csv_path);
  if (!csv) throw IoError("cannot open for writing: " + csv_path);
  csv << "row,task,input_features,regime,wer,f1,intent_acc,conv_intent_acc,"
         "corpus_fingerprint,checkpoint_fingerprint\n";
  for (const auto& r : rows) {
    csv << r.row_label << "," << r.task << ",\"" << r.input_features << "\","
        << r.regime << "," << r.wer << "," << r.f1 << "," << r.intent_acc
        << "," << r.conv_intent_acc << "," << r.corpus_fingerprint << ","
        << r.checkpoint_fingerprint << "\n";
  }
  if (!csv) throw IoError("short write: " + csv_path);
}

}  // namespace dialslu
