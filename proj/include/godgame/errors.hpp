#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace godgame {

enum class ErrorCode {
    // tilemap
    OutOfBounds,
    InvalidIndex,
    InvalidGrid,
    GridOccupiedByBoss,
    MissingTile,
    DuplicateId,
    SemanticsViolation,
    // configuration and documents
    ConfigError,
    ParseError,
    // wordbank
    InsufficientVocabulary,
    InsufficientWords,
    UnknownWord,
    // terraform
    EmptySelection,
    WordNotOwned,
    Timeout,
    ServerError,
    MalformedResponse,
    TerraformInProgress,
    // simulation
    UnknownVillager,
    UnknownMonster,
    IllegalTask,
    NotChoppable,
    NothingToCollect,
    GameOver,
    // telemetry
    IoError,
    MalformedLine,
    EmptyLog,
    EmptyInput,
    // server
    UnknownSession,
    BadRequest,
};

// Stable snake_case identifier, used in HTTP error bodies and CLI output.
std::string_view error_code_name(ErrorCode code);

class GameError : public std::runtime_error {
public:
    GameError(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// A GameError tied to a 1-based line of an input document.
class LineError : public GameError {
public:
    LineError(ErrorCode code, std::size_t line, const std::string& message)
        : GameError(code, "line " + std::to_string(line) + ": " + message), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace godgame
