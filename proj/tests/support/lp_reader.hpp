#pragma once

// Independent readers for the two export formats. Both parse into the same
// structure so a byte-level-different LP and MPS pair can be compared as
// coefficient matrices.

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "nba/rational.hpp"

namespace lpread {

using nba::Rat;

struct ParsedRow {
  std::string name;
  std::map<std::string, Rat> coefs;
  char sense = '<';  // '<', '>', '='
  Rat rhs;
};

struct ParsedModel {
  std::map<std::string, Rat> objective;
  std::vector<ParsedRow> rows;
  std::set<std::string> binaries;

  bool operator==(const ParsedModel& other) const {
    if (objective != other.objective || binaries != other.binaries) return false;
    if (rows.size() != other.rows.size()) return false;
    for (size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].name != other.rows[i].name || rows[i].sense != other.rows[i].sense ||
          rows[i].rhs != other.rows[i].rhs || rows[i].coefs != other.rows[i].coefs) {
        return false;
      }
    }
    return true;
  }
};

namespace detail {

inline bool is_number_start(const std::string& tok) {
  return !tok.empty() && (std::isdigit(static_cast<unsigned char>(tok[0])) || tok[0] == '.');
}

// Parses "3 x + y - 2 z" style token streams into a coefficient map.
inline void parse_terms(const std::vector<std::string>& toks, size_t from, size_t to,
                        std::map<std::string, Rat>& out) {
  Rat sign(1);
  std::optional<Rat> coef;
  for (size_t i = from; i < to; ++i) {
    const std::string& tok = toks[i];
    if (tok == "+") {
      sign = Rat(1);
    } else if (tok == "-") {
      sign = Rat(-1);
    } else if (is_number_start(tok)) {
      coef = nba::parse_rat(tok);
    } else {
      out[tok] += sign * (coef ? *coef : Rat(1));
      sign = Rat(1);
      coef.reset();
    }
  }
}

inline std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> toks;
  std::string cur;
  auto flush = [&]() {
    if (!cur.empty()) {
      toks.push_back(cur);
      cur.clear();
    }
  };
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == '\n') {
      flush();
    } else if (c == '+' || c == '-' || c == ':') {
      flush();
      toks.push_back(std::string(1, c));
    } else if (c == '<' || c == '>' || c == '=') {
      if (cur == "<" || cur == ">") {
        cur += c;
        flush();
      } else {
        flush();
        cur = std::string(1, c);
      }
    } else {
      if (cur == "<" || cur == ">" || cur == "=") flush();
      cur += c;
    }
  }
  flush();
  return toks;
}

}  // namespace detail

inline ParsedModel parse_lp(const std::string& text) {
  std::vector<std::string> toks = detail::tokenize(text);
  ParsedModel model;

  enum class Section { None, Objective, Constraints, Bounds, Binaries, Generals };
  Section section = Section::None;

  size_t i = 0;
  auto keyword = [&](size_t at) -> Section {
    if (at >= toks.size()) return Section::None;
    std::string lower;
    for (char c : toks[at]) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (lower == "minimize" || lower == "maximize") return Section::Objective;
    if (lower == "subject") return Section::Constraints;
    if (lower == "bounds") return Section::Bounds;
    if (lower == "binaries" || lower == "binary") return Section::Binaries;
    if (lower == "generals" || lower == "general") return Section::Generals;
    return Section::None;
  };

  while (i < toks.size()) {
    std::string lower;
    for (char c : toks[i]) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (lower == "end") break;
    Section next = keyword(i);
    if (next == Section::Objective) {
      ++i;
      // "obj : terms..." until the next section keyword
      size_t start = i;
      while (start < toks.size() && toks[start] != ":") ++start;
      ++start;
      size_t stop = start;
      while (stop < toks.size() && keyword(stop) == Section::None) ++stop;
      detail::parse_terms(toks, start, stop, model.objective);
      i = stop;
      section = Section::Objective;
      continue;
    }
    if (next == Section::Constraints) {
      i += 2;  // "Subject" "To"
      section = Section::Constraints;
      while (i < toks.size() && keyword(i) == Section::None && toks[i] != "End") {
        ParsedRow row;
        row.name = toks[i];
        i += 2;  // name ":"
        size_t stop = i;
        while (stop < toks.size() && toks[stop] != "<=" && toks[stop] != ">=" &&
               toks[stop] != "=") {
          ++stop;
        }
        detail::parse_terms(toks, i, stop, row.coefs);
        row.sense = toks[stop] == "<=" ? '<' : toks[stop] == ">=" ? '>' : '=';
        Rat sign(1);
        size_t rhs_at = stop + 1;
        if (toks[rhs_at] == "-") {
          sign = Rat(-1);
          ++rhs_at;
        }
        row.rhs = sign * nba::parse_rat(toks[rhs_at]);
        i = rhs_at + 1;
        model.rows.push_back(std::move(row));
      }
      continue;
    }
    if (next == Section::Bounds) {
      section = Section::Bounds;
      ++i;
      while (i < toks.size() && keyword(i) == Section::None && toks[i] != "End") ++i;
      continue;  // bounds carry no matrix information for these models
    }
    if (next == Section::Binaries) {
      section = Section::Binaries;
      ++i;
      while (i < toks.size() && keyword(i) == Section::None && toks[i] != "End") {
        model.binaries.insert(toks[i]);
        ++i;
      }
      continue;
    }
    if (next == Section::Generals) {
      section = Section::Generals;
      ++i;
      continue;
    }
    ++i;
  }
  (void)section;
  return model;
}

inline ParsedModel parse_mps(const std::string& text) {
  ParsedModel model;
  std::istringstream in(text);
  std::string line;
  enum class Section { None, Rows, Columns, Rhs, Bounds };
  Section section = Section::None;
  std::map<std::string, size_t> row_index;
  std::map<std::string, char> row_sense;
  std::vector<std::string> row_order;
  bool integer_mode = false;

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::vector<std::string> toks;
    std::string tok;
    while (ls >> tok) toks.push_back(tok);
    if (toks.empty()) continue;
    if (toks[0] == "NAME") continue;
    if (toks[0] == "ROWS") {
      section = Section::Rows;
      continue;
    }
    if (toks[0] == "COLUMNS") {
      section = Section::Columns;
      continue;
    }
    if (toks[0] == "RHS" && toks.size() == 1) {
      section = Section::Rhs;
      continue;
    }
    if (toks[0] == "RANGES") {
      section = Section::None;
      continue;
    }
    if (toks[0] == "BOUNDS") {
      section = Section::Bounds;
      continue;
    }
    if (toks[0] == "ENDATA") break;

    switch (section) {
      case Section::Rows: {
        if (toks.size() < 2) continue;
        char kind = toks[0][0];
        if (kind == 'N') continue;  // objective row
        row_sense[toks[1]] = kind == 'L' ? '<' : kind == 'G' ? '>' : '=';
        row_index[toks[1]] = row_order.size();
        row_order.push_back(toks[1]);
        break;
      }
      case Section::Columns: {
        if (toks.size() >= 3 && toks[1] == "'MARKER'") {
          integer_mode = toks[2] == "'INTORG'";
          break;
        }
        const std::string& var = toks[0];
        if (integer_mode) model.binaries.insert(var);
        for (size_t f = 1; f + 1 < toks.size(); f += 2) {
          Rat coef = nba::parse_rat(toks[f + 1]);
          if (toks[f] == "obj") {
            model.objective[var] += coef;
          } else {
            if (model.rows.size() < row_order.size()) model.rows.resize(row_order.size());
            size_t r = row_index.at(toks[f]);
            model.rows[r].coefs[var] += coef;
          }
        }
        break;
      }
      case Section::Rhs: {
        for (size_t f = 1; f + 1 < toks.size(); f += 2) {
          if (model.rows.size() < row_order.size()) model.rows.resize(row_order.size());
          model.rows[row_index.at(toks[f])].rhs = nba::parse_rat(toks[f + 1]);
        }
        break;
      }
      default: break;
    }
  }
  if (model.rows.size() < row_order.size()) model.rows.resize(row_order.size());
  for (size_t r = 0; r < row_order.size(); ++r) {
    model.rows[r].name = row_order[r];
    model.rows[r].sense = row_sense.at(row_order[r]);
  }
  return model;
}

}  // namespace lpread
