// SPDX-License-Identifier: Apache-2.0
//
// satbeam - satellite TX beamforming with terrestrial interference protection
// Copyright (C) 2025-2026 satbeam contributors
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

#ifndef SATBEAM_SRC_CLOSED_FORM_HPP
#define SATBEAM_SRC_CLOSED_FORM_HPP

#include <armadillo>
#include <utility>

namespace satbeam::detail {

// Regularized MMSE solve shared by the baseline and the interference-aware
// closed form, so the unpenalized paths agree bit for bit.
std::pair<arma::cx_mat, double> mmse_closed_form_core(const arma::cx_mat& mean_channel,
                                                      const arma::cx_mat& covariance,
                                                      const arma::cx_mat* interference,
                                                      double varsigma, double noise_power_w,
                                                      double tx_power_w);

} // namespace satbeam::detail

#endif
