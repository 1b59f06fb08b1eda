#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "moddens/graph.hpp"

namespace testutil {

inline moddens::Graph clique(int m) {
    std::vector<moddens::Edge> edges;
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            edges.push_back({i, j, 1.0});
        }
    }
    return moddens::Graph(m, std::move(edges));
}

/// Two K3 cliques {0,1,2} and {3,4,5} joined by the bridge 2-3.
inline moddens::Graph two_k3_bridge() {
    return moddens::Graph(6, {{0, 1, 1.0},
                              {0, 2, 1.0},
                              {1, 2, 1.0},
                              {3, 4, 1.0},
                              {3, 5, 1.0},
                              {4, 5, 1.0},
                              {2, 3, 1.0}});
}

inline moddens::Partition split_at(int node_count, int first_size) {
    std::vector<moddens::ClusterId> a(static_cast<std::size_t>(node_count), 1);
    for (int i = 0; i < first_size; ++i) a[static_cast<std::size_t>(i)] = 0;
    return moddens::Partition::from_assignment(std::move(a), node_count);
}

/// RAII temp file seeded with content.
class TempFile {
public:
    explicit TempFile(const std::string& content) {
        static int counter = 0;
        path_ = (std::filesystem::temp_directory_path() /
                 ("moddens_test_" + std::to_string(::getpid()) + "_" +
                  std::to_string(counter++)))
                    .string();
        std::ofstream(path_) << content;
    }
    ~TempFile() { std::remove(path_.c_str()); }
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

}  // namespace testutil
