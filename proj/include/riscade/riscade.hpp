// SPDX-License-Identifier: Apache-2.0
//
// riscade  Cascaded RIS channel estimation from few-bit measurements
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef riscade_riscade_H
#define riscade_riscade_H

#include "angular_domain.hpp"
#include "baselines.hpp"
#include "channel_model.hpp"
#include "common.hpp"
#include "config.hpp"
#include "denoisers.hpp"
#include "dft_ops.hpp"
#include "harness.hpp"
#include "linear_operator.hpp"
#include "math_util.hpp"
#include "quantizer.hpp"
#include "rng.hpp"
#include "vamp_solver.hpp"

#endif
