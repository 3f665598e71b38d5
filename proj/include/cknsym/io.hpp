#pragma once
// Record formatting shared by the CLI: CSV with a header row and fixed
// 17-significant-digit floats, or newline-delimited JSON (one object per
// record).  Deterministic by construction: fixed field order, fixed
// formatting, no locale dependence.

#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

namespace cknsym::io {

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Record {
  struct Field {
    std::string name;
    std::string text;
    bool numeric = false;
    double value = 0.0;
  };
  std::vector<Field> fields;

  void add(const std::string& name, double v) {
    fields.push_back({name, fmt17(v), true, v});
  }
  void add_text(const std::string& name, const std::string& s) {
    fields.push_back({name, s, false, 0.0});
  }
};

namespace detail {

inline bool csv_needs_quotes(const std::string& s) {
  return s.find_first_of(",\"\n") != std::string::npos;
}

inline std::string csv_escape(const std::string& s) {
  if (!csv_needs_quotes(s)) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string json_escape(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
  return out;
}

}  // namespace detail

inline std::string csv_header(const Record& r) {
  std::string out;
  for (size_t i = 0; i < r.fields.size(); ++i) {
    if (i) out += ',';
    out += detail::csv_escape(r.fields[i].name);
  }
  out += '\n';
  return out;
}

inline std::string csv_row(const Record& r) {
  std::string out;
  for (size_t i = 0; i < r.fields.size(); ++i) {
    if (i) out += ',';
    out += detail::csv_escape(r.fields[i].text);
  }
  out += '\n';
  return out;
}

// One JSON object per record; non-finite numbers become null.
inline std::string json_line(const Record& r) {
  std::string out = "{";
  for (size_t i = 0; i < r.fields.size(); ++i) {
    if (i) out += ',';
    out += detail::json_escape(r.fields[i].name);
    out += ':';
    if (r.fields[i].numeric) {
      out += std::isfinite(r.fields[i].value) ? r.fields[i].text : "null";
    } else {
      out += detail::json_escape(r.fields[i].text);
    }
  }
  out += "}\n";
  return out;
}

}  // namespace cknsym::io
