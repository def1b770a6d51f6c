#pragma once

#include <stdexcept>
#include <string>

namespace scratch_anomalies {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// I/O failure while reading an input file.
class UnreadableFile : public Error {
public:
    using Error::Error;
};

/// The file was read but is not a usable Scratch 3 project.
class MalformedProject : public Error {
public:
    using Error::Error;
};

/// The corpus directory contained no loadable project.
class EmptyCorpus : public Error {
public:
    using Error::Error;
};

/// Projects were loaded but none of them contains a script.
class NoScripts : public Error {
public:
    using Error::Error;
};

}  // namespace scratch_anomalies
