/******************************************************************************
 * Copyright 2026 The rlsmrac Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *****************************************************************************/

/**
 * @file trace.hpp
 * @brief CSV trace rows and key=value run summaries.
 *
 * acc columns:
 *   t,v_l,v,v_m,x_r,s_d,v_r,delta,e,u,k1,k2,k3,P11,P22,P33,pe_level,V,clamp_flag
 * generic-mrac columns:
 *   t,r,y_p,y_m,e1,u_p,theta_0..theta_{2n-1},P_diag_0.. | Gamma_diag_0..,pe_level,V
 *
 * For the gradient law the P11..P33 columns carry gamma_1..gamma_3.
 * NaN values (V outside analysis mode, pe_level before the first full
 * window) are written as empty fields.
 */

#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "rlsmrac/acc.hpp"
#include "rlsmrac/law_settings.hpp"
#include "rlsmrac/mrac_sim.hpp"

namespace rlsmrac {

/// %.10g, or an empty string for NaN.
std::string format_number(double x);

std::vector<std::string> acc_columns();
std::vector<std::string> mrac_columns(int parameter_count, AdaptiveLaw law);

std::string csv_line(const std::vector<std::string>& fields);
std::vector<std::string> acc_row(const AccSample& s);
std::vector<std::string> mrac_row(const MracSample& s);

/// Indices of the rows kept when writing every @p every-th sample; the
/// final sample is always kept.
std::vector<std::size_t> decimate(std::size_t count, int every);

using Summary = std::vector<std::pair<std::string, std::string>>;

void write_summary(std::ostream& os, const Summary& summary);
/// Parses key=value lines; blank lines and '#' comments are skipped.
Summary read_summary(const std::string& text);
const std::string* summary_value(const Summary& summary, const std::string& key);

}  // namespace rlsmrac
