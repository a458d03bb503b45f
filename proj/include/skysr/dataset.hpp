#pragma once

#include <filesystem>
#include <string>

#include "skysr/graph.hpp"
#include "skysr/taxonomy.hpp"

namespace skysr {

/// A road network with its category forest. On disk: a directory holding
/// nodes.txt, edges.txt, pois.txt and categories.txt.
struct Dataset {
    std::string name;
    CategoryForest forest;
    RoadGraph graph;
};

/// Throws LoadError for missing or malformed files.
Dataset load_dataset(const std::filesystem::path& dir);

/// Writes the four files; creates `dir` if needed. Numbers are written in
/// shortest round-trip form so a reload reproduces the data exactly.
void write_dataset(const std::filesystem::path& dir, const RoadGraph& g, const CategoryForest& f);

}  // namespace skysr
