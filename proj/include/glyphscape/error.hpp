// Copyright 2026 The Glyphscape Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace glyphscape {

/// Root of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller supplied an argument outside the operation's contract.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Size normalization could not reach the requested silhouette area.
class NormalizationError : public Error {
 public:
  NormalizationError(const std::string& what, double achieved_ratio)
      : Error(what), achieved_ratio_(achieved_ratio) {}
  double achieved_ratio() const noexcept { return achieved_ratio_; }

 private:
  double achieved_ratio_;
};

class BakeError : public Error {
 public:
  using Error::Error;
};

// Atlas file loading.
class FormatError : public Error {
 public:
  using Error::Error;
};

class VersionError : public Error {
 public:
  using Error::Error;
};

class TruncationError : public Error {
 public:
  using Error::Error;
};

// CSV ingestion.
class IngestionError : public Error {
 public:
  enum class Kind { kUnreadable, kEmptyFile, kNoHeader, kZeroRows };
  IngestionError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// A value fell outside the closed domain of a bin specification.
class DomainError : public Error {
 public:
  DomainError(const std::string& what, std::size_t row) : Error(what), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

/// Binding a dataset to a channel mapping failed at a specific row/channel.
class BindError : public Error {
 public:
  BindError(const std::string& what, std::size_t row, std::string channel)
      : Error(what), row_(row), channel_(std::move(channel)) {}
  std::size_t row() const noexcept { return row_; }
  const std::string& channel() const noexcept { return channel_; }

 private:
  std::size_t row_;
  std::string channel_;
};

/// Two inputs that must agree (e.g. atlas light vs scene light) do not.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace glyphscape
