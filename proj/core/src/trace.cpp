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

#include "rlsmrac/trace.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "rlsmrac/errors.hpp"

namespace rlsmrac {

std::string format_number(double x) {
  if (std::isnan(x)) {
    return {};
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::vector<std::string> acc_columns() {
  return {"t",  "v_l", "v",  "v_m", "x_r", "s_d", "v_r",      "delta", "e",         "u",
          "k1", "k2",  "k3", "P11", "P22", "P33", "pe_level", "V",     "clamp_flag"};
}

std::vector<std::string> mrac_columns(int parameter_count, AdaptiveLaw law) {
  std::vector<std::string> cols{"t", "r", "y_p", "y_m", "e1", "u_p"};
  for (int i = 0; i < parameter_count; ++i) {
    cols.push_back("theta_" + std::to_string(i));
  }
  const std::string gain = law == AdaptiveLaw::kRls ? "P_diag_" : "Gamma_diag_";
  for (int i = 0; i < parameter_count; ++i) {
    cols.push_back(gain + std::to_string(i));
  }
  cols.push_back("pe_level");
  cols.push_back("V");
  return cols;
}

std::string csv_line(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) {
      out += ',';
    }
    out += fields[i];
  }
  out += '\n';
  return out;
}

std::vector<std::string> acc_row(const AccSample& s) {
  return {format_number(s.t),           format_number(s.v_l),
          format_number(s.v),           format_number(s.v_m),
          format_number(s.x_r),         format_number(s.s_d),
          format_number(s.v_r),         format_number(s.delta),
          format_number(s.e),           format_number(s.u),
          format_number(s.k(0)),        format_number(s.k(1)),
          format_number(s.k(2)),        format_number(s.gain_diag(0)),
          format_number(s.gain_diag(1)), format_number(s.gain_diag(2)),
          format_number(s.pe_level),    format_number(s.lyapunov),
          s.clamp_flag ? "1" : "0"};
}

std::vector<std::string> mrac_row(const MracSample& s) {
  std::vector<std::string> row{format_number(s.t),   format_number(s.r),
                               format_number(s.y_p), format_number(s.y_m),
                               format_number(s.e1),  format_number(s.u_p)};
  for (Eigen::Index i = 0; i < s.theta.size(); ++i) {
    row.push_back(format_number(s.theta(i)));
  }
  for (Eigen::Index i = 0; i < s.gain_diag.size(); ++i) {
    row.push_back(format_number(s.gain_diag(i)));
  }
  row.push_back(format_number(s.pe_level));
  row.push_back(format_number(s.lyapunov));
  return row;
}

std::vector<std::size_t> decimate(std::size_t count, int every) {
  if (every < 1) {
    throw ValidationError("output_every must be at least 1");
  }
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < count; i += static_cast<std::size_t>(every)) {
    idx.push_back(i);
  }
  if (count > 0 && idx.back() != count - 1) {
    idx.push_back(count - 1);
  }
  return idx;
}

void write_summary(std::ostream& os, const Summary& summary) {
  for (const auto& [k, v] : summary) {
    os << k << '=' << v << '\n';
  }
}

Summary read_summary(const std::string& text) {
  Summary out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("summary line without '=': " + line);
    }
    out.emplace_back(line.substr(0, eq), line.substr(eq + 1));
  }
  return out;
}

const std::string* summary_value(const Summary& summary, const std::string& key) {
  for (const auto& [k, v] : summary) {
    if (k == key) {
      return &v;
    }
  }
  return nullptr;
}

}  // namespace rlsmrac
