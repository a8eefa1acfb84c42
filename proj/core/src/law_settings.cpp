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

#include "rlsmrac/law_settings.hpp"

#include "rlsmrac/errors.hpp"

namespace rlsmrac {

std::string_view to_string(AdaptiveLaw law) {
  return law == AdaptiveLaw::kGradient ? "gradient" : "rls";
}

AdaptiveLaw parse_law(std::string_view name) {
  if (name == "gradient") {
    return AdaptiveLaw::kGradient;
  }
  if (name == "rls") {
    return AdaptiveLaw::kRls;
  }
  throw ValidationError("unknown adaptive law '" + std::string(name) +
                        "' (expected gradient or rls)");
}

}  // namespace rlsmrac
