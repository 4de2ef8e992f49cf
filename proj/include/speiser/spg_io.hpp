#pragma once

#include <string>
#include <vector>

#include "speiser/patch.hpp"

namespace speiser {

/// SPG plain-text format, version 1.
///
///   spg 1
///   k <int>
///   labels <v1> ... <vk>
///   base <cyclic label order>
///   root <vid>
///   vertex <vid> cross|circle <heid_0> ... [boundary]
///   halfedge <heid> type <int> twin <heid|dangling>
///
/// '#' starts a comment. Complex labels are written `a+bi` or `inf`.
/// Readers reject malformed files and any invariant violation, citing line numbers.
SpeiserPatch parse_spg(const std::string& text, const std::string& source_name = "<input>");
SpeiserPatch read_spg_file(const std::string& path);

std::string to_spg(const SpeiserPatch& patch, const std::vector<std::string>& header_comments = {});
void write_spg_file(const std::string& path, const SpeiserPatch& patch,
                    const std::vector<std::string>& header_comments = {});

/// Graphviz export: one undirected edge per twin pair, shape by color,
/// edge label = type, face labels as comments.
std::string to_dot(const SpeiserPatch& patch);

}  // namespace speiser
