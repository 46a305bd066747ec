#pragma once

#include <stdexcept>
#include <string>

namespace eml {

// Exit-code families (see tools/eml_main.cpp):
//   ConfigError    -> 2   bad parameters, invalid combinations, agreement failures
//   ProtocolAbort  -> 3   integrity failures that abort a session
//   IoError        -> 4   file/socket/parse problems
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ProtocolAbort : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- configuration ---
struct RangeError : ConfigError {
    using ConfigError::ConfigError;
};
struct DivisionByZero : ConfigError {
    using ConfigError::ConfigError;
};
struct AgreementMismatch : ConfigError {
    explicit AgreementMismatch(const std::string& field)
        : ConfigError("handshake agreement mismatch on field: " + field), field(field) {}
    std::string field;
};
struct AtomOverflow : ConfigError {
    using ConfigError::ConfigError;
};
struct CoincidentAtoms : ConfigError {
    using ConfigError::ConfigError;
};
struct SingularKernel : ConfigError {
    using ConfigError::ConfigError;
};

// --- protocol integrity ---
struct MacCheckFailed : ProtocolAbort {
    MacCheckFailed() : ProtocolAbort("MAC check failed: opened values were tampered with; aborting") {}
};
struct CorrelationCheckFailed : ProtocolAbort {
    CorrelationCheckFailed()
        : ProtocolAbort("triple sacrifice failed: preprocessing correlation is broken; aborting") {}
};
struct CommitmentMismatch : ProtocolAbort {
    CommitmentMismatch() : ProtocolAbort("commitment opening does not match digest; aborting") {}
};
struct SessionMismatch : ProtocolAbort {
    using ProtocolAbort::ProtocolAbort;
};
struct PeerAbort : ProtocolAbort {
    using ProtocolAbort::ProtocolAbort;
};
struct HandshakeFailure : ProtocolAbort {
    using ProtocolAbort::ProtocolAbort;
};
struct PreprocessingExhausted : ProtocolAbort {
    explicit PreprocessingExhausted(const std::string& what_kind)
        : ProtocolAbort("preprocessing store exhausted (" + what_kind +
                        "); rerun the dealer with larger budgets or raise --preproc-*") {}
};

// --- I/O ---
struct ParseError : IoError {
    using IoError::IoError;
};
struct FrameTooLarge : IoError {
    using IoError::IoError;
};

}  // namespace eml
