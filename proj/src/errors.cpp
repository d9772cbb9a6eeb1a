#include "godgame/errors.hpp"

namespace godgame {

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::OutOfBounds: return "out_of_bounds";
        case ErrorCode::InvalidIndex: return "invalid_index";
        case ErrorCode::InvalidGrid: return "invalid_grid";
        case ErrorCode::GridOccupiedByBoss: return "grid_occupied";
        case ErrorCode::MissingTile: return "missing_tile";
        case ErrorCode::DuplicateId: return "duplicate_id";
        case ErrorCode::SemanticsViolation: return "semantics_violation";
        case ErrorCode::ConfigError: return "config_error";
        case ErrorCode::ParseError: return "parse_error";
        case ErrorCode::InsufficientVocabulary: return "insufficient_vocabulary";
        case ErrorCode::InsufficientWords: return "insufficient_words";
        case ErrorCode::UnknownWord: return "unknown_word";
        case ErrorCode::EmptySelection: return "empty_selection";
        case ErrorCode::WordNotOwned: return "word_not_owned";
        case ErrorCode::Timeout: return "generator_timeout";
        case ErrorCode::ServerError: return "generator_error";
        case ErrorCode::MalformedResponse: return "malformed_response";
        case ErrorCode::TerraformInProgress: return "terraform_in_progress";
        case ErrorCode::UnknownVillager: return "unknown_villager";
        case ErrorCode::UnknownMonster: return "unknown_monster";
        case ErrorCode::IllegalTask: return "illegal_task";
        case ErrorCode::NotChoppable: return "not_choppable";
        case ErrorCode::NothingToCollect: return "nothing_to_collect";
        case ErrorCode::GameOver: return "game_over";
        case ErrorCode::IoError: return "io_error";
        case ErrorCode::MalformedLine: return "malformed_line";
        case ErrorCode::EmptyLog: return "empty_log";
        case ErrorCode::EmptyInput: return "empty_input";
        case ErrorCode::UnknownSession: return "unknown_session";
        case ErrorCode::BadRequest: return "bad_request";
    }
    return "unknown";
}

} // namespace godgame
