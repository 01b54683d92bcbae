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

#include "lpfap/mps.hpp"

#include <zlib.h>

#include <cerrno>
#include <cmath>
#include <optional>
#include <functional>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <vector>

namespace lpfap {

const char* toString(MpsErrorKind kind) {
  switch (kind) {
    case MpsErrorKind::Io: return "io";
    case MpsErrorKind::Syntax: return "syntax";
    case MpsErrorKind::SectionOrder: return "section-order";
    case MpsErrorKind::MissingSection: return "missing-section";
    case MpsErrorKind::UnknownRow: return "unknown-row";
    case MpsErrorKind::UnknownColumn: return "unknown-column";
    case MpsErrorKind::DuplicateName: return "duplicate-name";
    case MpsErrorKind::InconsistentBounds: return "inconsistent-bounds";
  }
  return "unknown";
}

MpsError::MpsError(MpsErrorKind kind, int line, const std::string& what)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " +
                                        what + " [" + toString(kind) + "]"
                                  : what + " [" + toString(kind) + "]"),
      kind_(kind),
      line_(line) {}

namespace {

constexpr double kMpsInfinity = 1e30;

enum class Section {
  None,
  Name,
  ObjSense,
  Rows,
  Columns,
  Rhs,
  Ranges,
  Bounds,
  End
};

bool sectionFromKeyword(std::string_view word, Section& out) {
  static const std::pair<std::string_view, Section> table[] = {
      {"NAME", Section::Name},       {"OBJSENSE", Section::ObjSense},
      {"ROWS", Section::Rows},       {"COLUMNS", Section::Columns},
      {"RHS", Section::Rhs},         {"RANGES", Section::Ranges},
      {"BOUNDS", Section::Bounds},   {"ENDATA", Section::End}};
  for (const auto& [key, sec] : table) {
    if (word == key) {
      out = sec;
      return true;
    }
  }
  return false;
}

std::vector<std::string_view> splitWhitespace(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    std::size_t j = i;
    while (j < line.size() &&
           !std::isspace(static_cast<unsigned char>(line[j])))
      ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> splitFixed(std::string_view line) {
  static constexpr std::pair<std::size_t, std::size_t> fields[] = {
      {1, 3}, {4, 12}, {14, 22}, {24, 36}, {39, 47}, {49, std::string_view::npos}};
  std::vector<std::string_view> out;
  for (const auto& [begin, end] : fields) {
    if (begin >= line.size()) break;
    const auto len = end == std::string_view::npos ? std::string_view::npos
                                                   : end - begin;
    const auto field = trim(line.substr(begin, len));
    if (!field.empty()) out.push_back(field);
  }
  return out;
}

// How a row [lo, hi] is emitted. Ranged rows are anchored at whichever end
// lets the range reproduce the other end exactly when read back.
struct RowForm {
  char type;
  double rhs = 0.0;
  std::optional<double> range;
};

std::optional<double> exactWidth(double base, const std::function<bool(double)>& reproduces) {
  double down = base, up = base;
  for (int k = 0; k < 8; ++k) {
    if (reproduces(down)) return down;
    if (reproduces(up)) return up;
    down = std::nextafter(down, 0.0);
    up = std::nextafter(up, kInf);
  }
  return std::nullopt;
}

RowForm rowForm(double lo, double hi) {
  if (lo == -kInf && hi == kInf) return {'N', 0.0, std::nullopt};
  if (lo == -kInf) return {'L', hi, std::nullopt};
  if (hi == kInf) return {'G', lo, std::nullopt};
  if (lo == hi) return {'E', lo, std::nullopt};
  const double base = hi - lo;
  if (auto r = exactWidth(base, [&](double r) { return lo + r == hi; })) return {'G', lo, r};
  if (auto r = exactWidth(base, [&](double r) { return hi - r == lo; })) return {'L', hi, r};
  return {'G', lo, base};
}

struct RowData {
  char type;
  double rhs = 0.0;
  double range = 0.0;
  bool hasRange = false;
};

struct ColData {
  double cost = 0.0;
  double lower = 0.0;
  double upper = kInf;
  bool integer = false;
  bool lowerSet = false;
  int boundLine = 0;
};

class MpsParser {
 public:
  MpsParser(std::string_view text, MpsFormat format)
      : text_(text), format_(format) {}

  MipInstance run();

 private:
  [[noreturn]] void fail(MpsErrorKind kind, const std::string& msg) const {
    throw MpsError(kind, lineNo_, msg);
  }

  double number(std::string_view token) const;
  int findRow(std::string_view name) const;
  int findCol(std::string_view name) const;

  void enterSection(Section next, const std::vector<std::string_view>& tokens);
  void parseRow(const std::vector<std::string_view>& t);
  void parseColumn(const std::vector<std::string_view>& t);
  void parseRhsOrRange(const std::vector<std::string_view>& t, bool isRange);
  void parseBound(const std::vector<std::string_view>& t);
  void parseObjSense(std::string_view word);

  std::string_view text_;
  MpsFormat format_;
  int lineNo_ = 0;
  Section section_ = Section::None;
  bool seenRows_ = false;
  bool seenColumns_ = false;

  std::string name_;
  bool maximize_ = false;
  std::string objName_;
  double objRhs_ = 0.0;
  std::vector<std::string> rowNames_;
  std::vector<RowData> rows_;
  std::unordered_map<std::string, int> rowIndex_;
  std::vector<std::string> colNames_;
  std::vector<ColData> cols_;
  std::unordered_map<std::string, int> colIndex_;
  std::vector<SparseMatrix::Triplet> entries_;
  bool integerMarker_ = false;
};

double MpsParser::number(std::string_view token) const {
  std::string s(token);
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0' || std::isnan(v))
    fail(MpsErrorKind::Syntax, "invalid number '" + s + "'");
  if (v >= kMpsInfinity) v = kInf;
  if (v <= -kMpsInfinity) v = -kInf;
  return v;
}

int MpsParser::findRow(std::string_view name) const {
  auto it = rowIndex_.find(std::string(name));
  if (it == rowIndex_.end())
    fail(MpsErrorKind::UnknownRow, "unknown row '" + std::string(name) + "'");
  return it->second;
}

int MpsParser::findCol(std::string_view name) const {
  auto it = colIndex_.find(std::string(name));
  if (it == colIndex_.end())
    fail(MpsErrorKind::UnknownColumn,
         "unknown column '" + std::string(name) + "'");
  return it->second;
}

void MpsParser::parseObjSense(std::string_view word) {
  if (word == "MAX" || word == "MAXIMIZE")
    maximize_ = true;
  else if (word == "MIN" || word == "MINIMIZE")
    maximize_ = false;
  else
    fail(MpsErrorKind::Syntax, "invalid OBJSENSE '" + std::string(word) + "'");
}

void MpsParser::enterSection(Section next,
                             const std::vector<std::string_view>& tokens) {
  if (static_cast<int>(next) <= static_cast<int>(section_))
    fail(MpsErrorKind::SectionOrder,
         "section " + std::string(tokens[0]) + " out of order");
  if (next > Section::Rows && next != Section::End && !seenRows_)
    fail(MpsErrorKind::SectionOrder,
         "section " + std::string(tokens[0]) + " before ROWS");
  if (next > Section::Columns && next != Section::End && !seenColumns_)
    fail(MpsErrorKind::SectionOrder,
         "section " + std::string(tokens[0]) + " before COLUMNS");
  section_ = next;
  switch (next) {
    case Section::Name:
      if (tokens.size() > 1) name_ = std::string(tokens[1]);
      break;
    case Section::ObjSense:
      if (tokens.size() > 1) parseObjSense(tokens[1]);
      break;
    case Section::Rows: seenRows_ = true; break;
    case Section::Columns: seenColumns_ = true; break;
    default: break;
  }
}

void MpsParser::parseRow(const std::vector<std::string_view>& t) {
  if (t.size() != 2 || t[0].size() != 1)
    fail(MpsErrorKind::Syntax, "ROWS entry needs a type and a name");
  const char type = t[0][0];
  if (type != 'N' && type != 'L' && type != 'G' && type != 'E')
    fail(MpsErrorKind::Syntax, "invalid row type '" + std::string(t[0]) + "'");
  std::string name(t[1]);
  if (name == objName_ || rowIndex_.count(name))
    fail(MpsErrorKind::DuplicateName, "duplicate row '" + name + "'");
  if (type == 'N' && objName_.empty()) {
    objName_ = name;
    return;
  }
  rowIndex_.emplace(name, static_cast<int>(rows_.size()));
  rowNames_.push_back(std::move(name));
  rows_.push_back({type});
}

void MpsParser::parseColumn(const std::vector<std::string_view>& t) {
  auto unquote = [](std::string_view v) {
    if (v.size() >= 2 && v.front() == '\'' && v.back() == '\'') v = v.substr(1, v.size() - 2);
    return v;
  };
  // Quotes around MARKER/INTORG/INTEND are optional in the wild.
  if (t.size() >= 3 && unquote(t[1]) == "MARKER" &&
      (t[1] != "MARKER" || unquote(t[2]) == "INTORG" || unquote(t[2]) == "INTEND")) {
    if (unquote(t[2]) == "INTORG")
      integerMarker_ = true;
    else if (unquote(t[2]) == "INTEND")
      integerMarker_ = false;
    else
      fail(MpsErrorKind::Syntax, "invalid marker " + std::string(t[2]));
    return;
  }
  if (t.size() != 3 && t.size() != 5)
    fail(MpsErrorKind::Syntax, "COLUMNS entry needs 3 or 5 fields");
  std::string name(t[0]);
  auto it = colIndex_.find(name);
  int col;
  if (it == colIndex_.end()) {
    col = static_cast<int>(cols_.size());
    colIndex_.emplace(name, col);
    colNames_.push_back(std::move(name));
    cols_.push_back({});
    cols_.back().integer = integerMarker_;
  } else {
    col = it->second;
  }
  for (std::size_t k = 1; k + 1 < t.size(); k += 2) {
    const double v = number(t[k + 1]);
    if (!std::isfinite(v))
      fail(MpsErrorKind::Syntax, "infinite matrix coefficient");
    if (!objName_.empty() && t[k] == objName_) {
      cols_[col].cost += v;
    } else {
      entries_.push_back({findRow(t[k]), col, v});
    }
  }
}

void MpsParser::parseRhsOrRange(const std::vector<std::string_view>& t,
                                bool isRange) {
  // optional leading set name: even field count means it is absent
  const std::size_t first = (t.size() % 2 == 0) ? 0 : 1;
  if (t.size() < 2 || t.size() > 5)
    fail(MpsErrorKind::Syntax, isRange ? "malformed RANGES entry"
                                       : "malformed RHS entry");
  for (std::size_t k = first; k + 1 < t.size(); k += 2) {
    const double v = number(t[k + 1]);
    if (!objName_.empty() && t[k] == objName_) {
      if (!isRange) objRhs_ = v;
      continue;
    }
    RowData& row = rows_[findRow(t[k])];
    if (isRange) {
      row.range = v;
      row.hasRange = true;
    } else {
      row.rhs = v;
    }
  }
}

void MpsParser::parseBound(const std::vector<std::string_view>& t) {
  if (t.size() < 2 || t.size() > 4)
    fail(MpsErrorKind::Syntax, "malformed BOUNDS entry");
  const std::string_view type = t[0];
  const bool needsValue = type == "UP" || type == "LO" || type == "FX" ||
                          type == "LI" || type == "UI";
  std::string_view colName;
  std::string_view valueText;
  if (needsValue) {
    if (t.size() == 4) {
      colName = t[2];
      valueText = t[3];
    } else if (t.size() == 3) {
      colName = t[1];
      valueText = t[2];
    } else {
      fail(MpsErrorKind::Syntax, "bound " + std::string(type) + " needs a value");
    }
  } else if (t.size() == 4) {
    colName = t[2];
  } else if (t.size() == 3) {
    colName = colIndex_.count(std::string(t[2])) ? t[2] : t[1];
  } else {
    colName = t[1];
  }
  ColData& col = cols_[findCol(colName)];
  col.boundLine = lineNo_;
  const double v = needsValue ? number(valueText) : 0.0;
  if (type == "UP" || type == "UI") {
    if (v < 0.0 && col.lower == 0.0 && !col.lowerSet) col.lower = -kInf;
    col.upper = v;
    if (type == "UI") col.integer = true;
  } else if (type == "LO" || type == "LI") {
    col.lower = v;
    col.lowerSet = true;
    if (type == "LI") col.integer = true;
  } else if (type == "FX") {
    col.lower = col.upper = v;
    col.lowerSet = true;
  } else if (type == "FR") {
    col.lower = -kInf;
    col.upper = kInf;
    col.lowerSet = true;
  } else if (type == "MI") {
    col.lower = -kInf;
    col.lowerSet = true;
  } else if (type == "PL") {
    col.upper = kInf;
  } else if (type == "BV") {
    col.lower = 0.0;
    col.upper = 1.0;
    col.lowerSet = true;
    col.integer = true;
  } else {
    fail(MpsErrorKind::Syntax, "unsupported bound type '" + std::string(type) + "'");
  }
}

MipInstance MpsParser::run() {
  std::size_t pos = 0;
  while (pos <= text_.size()) {
    std::size_t eol = text_.find('\n', pos);
    if (eol == std::string_view::npos) eol = text_.size();
    std::string_view line = text_.substr(pos, eol - pos);
    pos = eol + 1;
    ++lineNo_;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty() || line.front() == '*') continue;

    const bool indented = std::isspace(static_cast<unsigned char>(line.front()));
    if (!indented) {
      const auto tokens = splitWhitespace(line);
      Section next;
      if (sectionFromKeyword(tokens[0], next)) {
        enterSection(next, tokens);
        if (next == Section::End) break;
        continue;
      }
      if (section_ != Section::ObjSense)
        fail(MpsErrorKind::Syntax,
             "unknown section '" + std::string(tokens[0]) + "'");
    }

    const bool marker = line.find("MARKER") != std::string_view::npos &&
                        (line.find("INTORG") != std::string_view::npos ||
                         line.find("INTEND") != std::string_view::npos);
    const auto tokens = (format_ == MpsFormat::Fixed && !marker)
                            ? splitFixed(line)
                            : splitWhitespace(line);
    if (tokens.empty()) continue;
    switch (section_) {
      case Section::ObjSense: parseObjSense(tokens[0]); break;
      case Section::Rows: parseRow(tokens); break;
      case Section::Columns: parseColumn(tokens); break;
      case Section::Rhs: parseRhsOrRange(tokens, false); break;
      case Section::Ranges: parseRhsOrRange(tokens, true); break;
      case Section::Bounds: parseBound(tokens); break;
      default: fail(MpsErrorKind::SectionOrder, "data line outside a section");
    }
  }
  if (!seenRows_) throw MpsError(MpsErrorKind::MissingSection, 0, "missing ROWS section");
  if (!seenColumns_)
    throw MpsError(MpsErrorKind::MissingSection, 0, "missing COLUMNS section");

  MipInstance inst;
  inst.name = name_;
  inst.maximize = maximize_;
  const int m = static_cast<int>(rows_.size());
  const int n = static_cast<int>(cols_.size());
  inst.matrix = SparseMatrix::fromTriplets(m, n, std::move(entries_));
  inst.rowNames = std::move(rowNames_);
  inst.colNames = std::move(colNames_);
  const double sign = maximize_ ? -1.0 : 1.0;
  inst.objectiveOffset = sign * -objRhs_;
  for (const RowData& row : rows_) {
    double lo = -kInf;
    double hi = kInf;
    const double r = std::abs(row.range);
    switch (row.type) {
      case 'L':
        hi = row.rhs;
        if (row.hasRange) lo = row.rhs - r;
        break;
      case 'G':
        lo = row.rhs;
        if (row.hasRange) hi = row.rhs + r;
        break;
      case 'E':
        lo = hi = row.rhs;
        if (row.hasRange && row.range > 0) hi = row.rhs + r;
        if (row.hasRange && row.range < 0) lo = row.rhs - r;
        break;
      default: break;
    }
    inst.rowLower.push_back(lo);
    inst.rowUpper.push_back(hi);
  }
  for (std::size_t j = 0; j < cols_.size(); ++j) {
    const ColData& col = cols_[j];
    inst.objective.push_back(sign * col.cost);
    inst.colLower.push_back(col.lower);
    inst.colUpper.push_back(col.upper);
    inst.varType.push_back(col.integer ? VarType::Integer : VarType::Continuous);
    if (col.lower > col.upper)
      throw MpsError(MpsErrorKind::InconsistentBounds, col.boundLine,
                     "column '" + inst.colNames[j] + "' has lower bound above upper bound");
  }
  for (int i = 0; i < m; ++i)
    if (inst.rowLower[i] > inst.rowUpper[i])
      throw MpsError(MpsErrorKind::InconsistentBounds, lineNo_,
                     "row '" + inst.rowNames[i] + "' has inconsistent bounds");
  try {
    finalizeInstance(inst);
  } catch (const InvalidInstance& e) {
    throw MpsError(MpsErrorKind::InconsistentBounds, lineNo_, e.what());
  }
  return inst;
}

std::string formatNumber(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

MipInstance parseMps(std::string_view text, MpsFormat format) {
  return MpsParser(text, format).run();
}

MipInstance readMpsFile(const std::string& path, MpsFormat format) {
  gzFile file = gzopen(path.c_str(), "rb");
  if (!file) throw MpsError(MpsErrorKind::Io, 0, "cannot open '" + path + "'");
  std::string content;
  char buf[1 << 16];
  int got;
  while ((got = gzread(file, buf, sizeof buf)) > 0) content.append(buf, got);
  const bool failed = got < 0;
  gzclose(file);
  if (failed) throw MpsError(MpsErrorKind::Io, 0, "cannot read '" + path + "'");
  MipInstance inst = parseMps(content, format);
  if (inst.name.empty()) {
    auto slash = path.find_last_of('/');
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    for (const char* suffix : {".gz", ".mps"}) {
      const std::string s(suffix);
      if (base.size() > s.size() && base.compare(base.size() - s.size(), s.size(), s) == 0)
        base.resize(base.size() - s.size());
    }
    inst.name = base;
  }
  return inst;
}

void writeMps(const MipInstance& inst, std::ostream& out) {
  std::string objName = "OBJ";
  for (bool clash = true; clash;) {
    clash = false;
    for (const auto& r : inst.rowNames)
      if (r == objName) {
        objName += "_";
        clash = true;
        break;
      }
  }
  const double sign = inst.maximize ? -1.0 : 1.0;

  out << "NAME " << (inst.name.empty() ? "UNNAMED" : inst.name) << "\n";
  if (inst.maximize) out << "OBJSENSE\n    MAX\n";
  std::vector<RowForm> forms;
  for (int i = 0; i < inst.numRows(); ++i)
    forms.push_back(rowForm(inst.rowLower[i], inst.rowUpper[i]));
  out << "ROWS\n N  " << objName << "\n";
  for (int i = 0; i < inst.numRows(); ++i) {
    out << ' ' << forms[i].type << "  " << inst.rowNames[i] << "\n";
  }

  out << "COLUMNS\n";
  bool inMarker = false;
  for (int j = 0; j < inst.numCols(); ++j) {
    if (inst.isIntegral(j) != inMarker) {
      out << "    MARKER    'MARKER'    " << (inMarker ? "'INTEND'" : "'INTORG'")
          << "\n";
      inMarker = !inMarker;
    }
    const auto& name = inst.colNames[j];
    const auto col = inst.matrix.col(j);
    if (inst.objective[j] != 0.0 || col.size() == 0)
      out << "    " << name << "  " << objName << "  "
          << formatNumber(sign * inst.objective[j]) << "\n";
    for (std::size_t k = 0; k < col.size(); ++k)
      out << "    " << name << "  " << inst.rowNames[col.index[k]] << "  "
          << formatNumber(col.value[k]) << "\n";
  }
  if (inMarker) out << "    MARKER    'MARKER'    'INTEND'\n";

  out << "RHS\n";
  const double objRhs = -sign * inst.objectiveOffset;
  if (objRhs != 0.0) out << "    RHS  " << objName << "  " << formatNumber(objRhs) << "\n";
  for (int i = 0; i < inst.numRows(); ++i)
    if (forms[i].type != 'N' && forms[i].rhs != 0.0)
      out << "    RHS  " << inst.rowNames[i] << "  " << formatNumber(forms[i].rhs) << "\n";

  bool rangesHeader = false;
  for (int i = 0; i < inst.numRows(); ++i) {
    if (!forms[i].range) continue;
    if (!rangesHeader) {
      out << "RANGES\n";
      rangesHeader = true;
    }
    out << "    RNG  " << inst.rowNames[i] << "  " << formatNumber(*forms[i].range) << "\n";
  }

  out << "BOUNDS\n";
  for (int j = 0; j < inst.numCols(); ++j) {
    const double lo = inst.colLower[j];
    const double hi = inst.colUpper[j];
    const auto& name = inst.colNames[j];
    if (inst.isIntegral(j) && lo == 0.0 && hi == 1.0) {
      out << " BV BND  " << name << "\n";
    } else if (lo == hi) {
      out << " FX BND  " << name << "  " << formatNumber(lo) << "\n";
    } else if (lo == -kInf && hi == kInf) {
      out << " FR BND  " << name << "\n";
    } else {
      if (lo == -kInf)
        out << " MI BND  " << name << "\n";
      else if (lo != 0.0)
        out << " LO BND  " << name << "  " << formatNumber(lo) << "\n";
      if (hi != kInf)
        out << " UP BND  " << name << "  " << formatNumber(hi) << "\n";
      else if (inst.isIntegral(j))
        out << " PL BND  " << name << "\n";
    }
  }
  out << "ENDATA\n";
}

std::string writeMpsString(const MipInstance& instance) {
  std::ostringstream os;
  writeMps(instance, os);
  return os.str();
}

}  // namespace lpfap
