#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "fmsat/formula.hpp"

namespace fmsat {

class DimacsError : public std::runtime_error {
  public:
    explicit DimacsError(const std::string& what) : std::runtime_error(what) {}
};

/// Parses a standard DIMACS CNF document. The clause count must match the
/// header exactly and every literal must be within the declared range.
/// Comment lines are collected into `comments` when given; they are not
/// reproduced by write_dimacs.
Formula parse_dimacs(const std::string& text, std::vector<std::string>* comments = nullptr);

Formula read_dimacs_file(const std::string& path, std::vector<std::string>* comments = nullptr);

std::string write_dimacs(const Formula& f);

void write_dimacs_file(const Formula& f, const std::string& path);

}  // namespace fmsat
