// Copyright 2026 the lpfap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LPFAP_MPS_HPP
#define LPFAP_MPS_HPP

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

#include "lpfap/model.hpp"

namespace lpfap {

enum class MpsErrorKind {
  Io,
  Syntax,
  SectionOrder,
  MissingSection,
  UnknownRow,
  UnknownColumn,
  DuplicateName,
  InconsistentBounds,
};

const char* toString(MpsErrorKind kind);

class MpsError : public std::runtime_error {
 public:
  MpsError(MpsErrorKind kind, int line, const std::string& what);

  MpsErrorKind kind() const { return kind_; }
  /// 1-based line number, 0 when not attributable to a line.
  int line() const { return line_; }

 private:
  MpsErrorKind kind_;
  int line_;
};

/// Free format splits fields on whitespace (names may not contain blanks);
/// fixed format reads the classic column positions 2-3, 5-12, 15-22,
/// 25-36, 40-47 and 50-61.
enum class MpsFormat { Free, Fixed };

/// Parses an MPS document. Conventions:
///  - the first N row is the objective, further N rows become free rows;
///  - an RHS entry on the objective row sets the objective offset to -value;
///  - columns default to [0, +inf), integer marker columns included;
///  - UP with a negative value on a column whose lower bound is still 0
///    moves the lower bound to -inf;
///  - duplicate COLUMNS entries are summed;
///  - |value| >= 1e30 is read as infinite;
///  - OBJSENSE MAX negates the objective and sets MipInstance::maximize.
MipInstance parseMps(std::string_view text, MpsFormat format = MpsFormat::Free);

/// Reads a file, transparently decompressing gzip input (".gz" suffix or
/// gzip magic bytes).
MipInstance readMpsFile(const std::string& path,
                        MpsFormat format = MpsFormat::Free);

/// Writes free-format MPS with 17 significant digits.
void writeMps(const MipInstance& instance, std::ostream& out);
std::string writeMpsString(const MipInstance& instance);

}  // namespace lpfap

#endif  // LPFAP_MPS_HPP
