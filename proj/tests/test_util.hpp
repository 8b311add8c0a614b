#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "ftlsin/graph.hpp"

namespace test_util {

// Writes `content` to a unique temp file, removed on destruction.
class TempFile {
 public:
  explicit TempFile(const std::string& content, const std::string& tag = "f") {
    static int counter = 0;
    path_ = (std::filesystem::temp_directory_path() /
             ("ftlsin_test_" + tag + "_" + std::to_string(counter++) + ".txt"))
                .string();
    std::ofstream(path_) << content;
  }
  ~TempFile() { std::remove(path_.c_str()); }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class TempDir {
 public:
  explicit TempDir(const std::string& tag = "d") {
    static int counter = 0;
    path_ = (std::filesystem::temp_directory_path() /
             ("ftlsin_test_" + tag + "_" + std::to_string(counter++)))
                .string();
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

inline ftlsin::Graph graph_from_edges(
    const std::vector<std::pair<std::string, std::string>>& edges,
    bool directed = false) {
  ftlsin::GraphBuilder builder(directed);
  for (const auto& [a, b] : edges) builder.add_edge(a, b, 1.0);
  return builder.build();
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::string s((std::istreambuf_iterator<char>(in)),
                std::istreambuf_iterator<char>());
  return s;
}

}  // namespace test_util
