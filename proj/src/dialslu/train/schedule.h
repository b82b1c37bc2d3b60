// dialslu/train/schedule.h

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

#ifndef DIALSLU_TRAIN_SCHEDULE_H_
#define DIALSLU_TRAIN_SCHEDULE_H_

namespace dialslu {

// One-cycle learning rate: linear warm-up from initial_lr to max_lr over
// warmup_epochs, then linear annealing to final_lr at total_epochs.
// Evaluated per optimizer step at fractional-epoch resolution.
struct OneCycleSchedule {
  double initial_lr = 5e-5;
  double max_lr = 2e-4;
  double final_lr = 0.0;
  double warmup_epochs = 6.0;
  double total_epochs = 20.0;

  double lr(double epoch) const;

  // The reference 20-epoch cycle: 5e-5 -> 2e-4 over 6 epochs, then down to
  // 0 over the remaining 14.
  static OneCycleSchedule reference() { return {}; }

  // Same shape scaled to another horizon and peak: warm-up covers 30% of
  // the run and starts at a quarter of the peak.
  static OneCycleSchedule scaled(int epochs, double peak_lr) {
    OneCycleSchedule s;
    s.initial_lr = peak_lr / 4.0;
    s.max_lr = peak_lr;
    s.final_lr = 0.0;
    s.total_epochs = epochs;
    s.warmup_epochs = 0.3 * epochs;
    return s;
  }
};

// The reference schedule as a plain function of epoch position in [0, 20].
double one_cycle_lr(double epoch);

}  // namespace dialslu

#endif  // DIALSLU_TRAIN_SCHEDULE_H_
