// Copyright (c) The arbilomod contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef ARBILOMOD_TEXT_UTIL_HPP
#define ARBILOMOD_TEXT_UTIL_HPP

#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace arbilomod::text
{

inline std::string trim(std::string_view s)
{
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos)
  {
    return {};
  }
  const auto end = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(begin, end - begin + 1));
}

// Splits "key = value" after stripping '#' comments. Returns false for blank lines.
inline bool split_key_value(const std::string &line, std::string &key, std::string &value)
{
  std::string body = line.substr(0, line.find('#'));
  const auto eq = body.find('=');
  if (trim(body).empty())
  {
    return false;
  }
  if (eq == std::string::npos)
  {
    key = trim(body);
    value.clear();
    return true;
  }
  key = trim(body.substr(0, eq));
  value = trim(body.substr(eq + 1));
  return true;
}

inline std::vector<std::string> words(const std::string &s)
{
  std::vector<std::string> out;
  std::string w;
  for (char c : s)
  {
    if (c == ',' || c == ' ' || c == '\t')
    {
      if (!w.empty())
      {
        out.push_back(w);
        w.clear();
      }
    }
    else
    {
      w.push_back(c);
    }
  }
  if (!w.empty())
  {
    out.push_back(w);
  }
  return out;
}

}  // namespace arbilomod::text

#endif  // ARBILOMOD_TEXT_UTIL_HPP
