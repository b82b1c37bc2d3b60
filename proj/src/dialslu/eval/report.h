// dialslu/eval/report.h

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

#ifndef DIALSLU_EVAL_REPORT_H_
#define DIALSLU_EVAL_REPORT_H_

#include <map>
#include <string>
#include <vector>

namespace dialslu {

struct EvalReport {
  std::string task;            // "dialog_act" | "intent"
  std::string row_label;       // "C1".."C10" / "D1".."D4"
  std::string input_features;  // human-readable row description
  std::string regime;          // "-", "ref/ref", "ref/dec", "dec/dec"
  double wer = -1.0;           // fractions in [0,1]; -1 = not measured
  double f1 = -1.0;
  double intent_acc = -1.0;
  double conv_intent_acc = -1.0;
  std::map<std::string, double> per_conversation;  // task metric per conv
  std::string corpus_fingerprint;
  std::string checkpoint_fingerprint;
};

void write_reports(const std::string& path,
                   const std::vector<EvalReport>& reports);
std::vector<EvalReport> read_reports(const std::string& path);

// Renders one aligned-text table and one CSV per call, in row_label order.
// All reports must share a corpus fingerprint; an empty list is an error and
// writes nothing.
void emit_tables(const std::vector<EvalReport>& reports,
                 const std::string& text_path, const std::string& csv_path);

}  // namespace dialslu

#endif  // DIALSLU_EVAL_REPORT_H_
