// dialslu/train/schedule.cc

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

#include "dialslu/train/schedule.h"

namespace dialslu {

double OneCycleSchedule::lr(double epoch) const {
  if (epoch <= 0.0) return initial_lr;
  if (epoch < warmup_epochs) {
    return initial_lr + (max_lr - initial_lr) * (epoch / warmup_epochs);
  }
  if (epoch >= total_epochs) return final_lr;
  const double frac = (epoch - warmup_epochs) / (total_epochs - warmup_epochs);
  return max_lr + (final_lr - max_lr) * frac;
}

double one_cycle_lr(double epoch) { return OneCycleSchedule().lr(epoch); }

}  // namespace dialslu
