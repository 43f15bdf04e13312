//
// Copyright 2026 The DP Composer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef DPCOMPOSER_STATUS_MACROS_H_
#define DPCOMPOSER_STATUS_MACROS_H_

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define DPC_CONCAT_INNER_(a, b) a##b
#define DPC_CONCAT_(a, b) DPC_CONCAT_INNER_(a, b)

#define DPC_RETURN_IF_ERROR(expr)                \
  do {                                           \
    const absl::Status dpc_status_ = (expr);     \
    if (!dpc_status_.ok()) return dpc_status_;   \
  } while (false)

#define DPC_ASSIGN_OR_RETURN_IMPL_(tmp, lhs, rexpr) \
  auto tmp = (rexpr);                               \
  if (!tmp.ok()) return tmp.status();               \
  lhs = std::move(*tmp)

#define DPC_ASSIGN_OR_RETURN(lhs, rexpr) \
  DPC_ASSIGN_OR_RETURN_IMPL_(DPC_CONCAT_(dpc_statusor_, __LINE__), lhs, rexpr)

#endif  // DPCOMPOSER_STATUS_MACROS_H_
