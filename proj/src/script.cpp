#include "godgame/script.hpp"

#include "godgame/terraform.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace godgame {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        const size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

template <typename T>
T number(std::string_view s, size_t line, const char* what) {
    T v{};
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) {
        throw LineError(ErrorCode::ParseError, line, std::string("bad ") + what + " '" + std::string(s) + "'");
    }
    return v;
}

std::vector<std::string> split_words(std::string_view list, size_t line) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        const size_t comma = list.find(',', start);
        const auto w = list.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        if (w.empty()) throw LineError(ErrorCode::ParseError, line, "empty word in list");
        out.emplace_back(w);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

} // namespace

std::optional<Command> parse_command(std::string_view line, size_t n) {
    const auto t = split_ws(line);
    if (t.empty() || t[0].front() == '#') return std::nullopt;
    auto need = [&](size_t count) {
        if (t.size() != count) {
            throw LineError(ErrorCode::ParseError, n,
                            "expected " + std::to_string(count) + " fields, got " + std::to_string(t.size()));
        }
    };
    if (t.size() < 2) throw LineError(ErrorCode::ParseError, n, "missing command");
    const auto tick = number<int64_t>(t[0], n, "tick");
    if (tick < 0) throw LineError(ErrorCode::ParseError, n, "negative tick");

    if (t[1] == "terraform") {
        need(4);
        return Command::terraform(tick, number<int>(t[2], n, "grid index"), split_words(t[3], n));
    }
    if (t[1] != "task") throw LineError(ErrorCode::ParseError, n, "unknown command '" + std::string(t[1]) + "'");
    if (t.size() < 4) throw LineError(ErrorCode::ParseError, n, "task needs a villager id and a verb");
    const int vid = number<int>(t[2], n, "villager id");
    const auto kind = parse_task_kind(t[3]);
    if (!kind) throw LineError(ErrorCode::ParseError, n, "unknown task '" + std::string(t[3]) + "'");
    switch (*kind) {
    case TaskKind::Idle:
        need(4);
        return Command::assign(tick, vid, Task::idle());
    case TaskKind::Attack:
        need(5);
        return Command::assign(tick, vid, Task::attack(number<int>(t[4], n, "monster id")));
    case TaskKind::MoveTo:
    case TaskKind::Chop:
    case TaskKind::Collect: {
        need(6);
        const Cell c{number<int>(t[4], n, "x"), number<int>(t[5], n, "y")};
        return Command::assign(tick, vid, Task{*kind, c, 0});
    }
    }
    return std::nullopt;
}

std::string format_command(const Command& c) {
    std::ostringstream out;
    out << c.tick << ' ';
    if (c.kind == Command::Kind::Terraform) {
        out << "terraform " << c.grid_index << ' ';
        for (size_t i = 0; i < c.words.size(); ++i) out << (i ? "," : "") << c.words[i];
        return out.str();
    }
    out << "task " << c.villager_id << ' ' << task_kind_name(c.task.kind);
    switch (c.task.kind) {
    case TaskKind::Idle: break;
    case TaskKind::Attack: out << ' ' << c.task.target; break;
    default: out << ' ' << c.task.cell.x << ' ' << c.task.cell.y; break;
    }
    return out.str();
}

std::vector<Command> parse_script(std::string_view text) {
    std::vector<Command> out;
    size_t n = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        const size_t nl = text.find('\n', pos);
        const auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        ++n;
        if (auto c = parse_command(line, n)) {
            if (!out.empty() && c->tick < out.back().tick) {
                throw LineError(ErrorCode::ParseError, n, "ticks must be non-decreasing");
            }
            out.push_back(std::move(*c));
        }
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    return out;
}

std::vector<Command> load_script(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw GameError(ErrorCode::IoError, "cannot open script " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_script(buf.str());
}

std::string format_script(const std::vector<Command>& commands) {
    std::string out;
    for (const auto& c : commands) out += format_command(c) + "\n";
    return out;
}

std::optional<TerraformReceipt> apply_command(GameState& state, Generator& generator, const Command& command) {
    if (state.outcome != Outcome::Ongoing) throw GameError(ErrorCode::GameOver, "the game has ended");
    if (command.kind == Command::Kind::Terraform) {
        return terraform(state, generator, command.grid_index, command.words);
    }
    assign_task(state, command.villager_id, command.task);
    return std::nullopt;
}

ReplayResult replay(GameState& state, Generator& generator, const std::vector<Command>& commands, int64_t until_tick) {
    ReplayResult r;
    size_t i = 0;
    while (state.outcome == Outcome::Ongoing) {
        for (; i < commands.size() && commands[i].tick <= state.tick; ++i) {
            try {
                apply_command(state, generator, commands[i]);
                ++r.applied;
            } catch (const GameError& e) {
                r.rejected.push_back(format_command(commands[i]) + ": " + e.what());
            }
        }
        if (i >= commands.size() && state.tick >= until_tick) break;
        step(state, 1);
    }
    return r;
}

} // namespace godgame
