#pragma once

#include "gps/io.hpp"

#include <filesystem>

namespace gps {

// Parses named JSON documents; a document that fails validation is reported and skipped.
inline std::vector<InputDocument> parse_fixture_texts(const std::vector<std::pair<std::string, std::string>>& texts,
                                                      std::vector<std::string>* errors = nullptr) {
  std::vector<InputDocument> docs;
  for (const auto& [name, text] : texts) {
    try {
      docs.push_back(parse_document(text));
    } catch (const std::exception& e) {
      if (errors) errors->push_back(name + ": " + e.what());
    }
  }
  return docs;
}

inline std::vector<std::pair<std::string, std::string>> read_fixture_dir(const std::string& dir) {
  std::vector<std::filesystem::path> paths;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.path().extension() == ".json") paths.push_back(entry.path());
  std::sort(paths.begin(), paths.end());
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& p : paths) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    out.emplace_back(p.stem().string(), ss.str());
  }
  return out;
}

}  // namespace gps
