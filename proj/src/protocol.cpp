#include "puzzle_forge/protocol.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <vector>

#include "puzzle_forge/games.hpp"
#include "puzzle_forge/rng.hpp"

namespace pf::protocol {

namespace {

struct RequestError {
    std::string code;
    std::string msg;
};

json error(const std::string& code, const std::string& msg) { return json{{"error", code}, {"msg", msg}}; }

template <typename T>
T field(const json& request, const char* key) {
    const auto it = request.find(key);
    if (it == request.end()) throw RequestError{"bad_request", std::string("missing field ") + key};
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        throw RequestError{"bad_request", std::string("field ") + key + " has the wrong type"};
    }
}

GameId game_field(const json& request) {
    const auto name = field<std::string>(request, "game");
    const auto game = parse_game(name);
    if (!game) throw RequestError{"unknown_game", "unknown game " + name};
    return *game;
}

void send_all(int fd, const std::string& text) {
    std::size_t sent = 0;
    while (sent < text.size()) {
        const auto n = ::send(fd, text.data() + sent, text.size() - sent, MSG_NOSIGNAL);
        if (n <= 0) return;
        sent += static_cast<std::size_t>(n);
    }
}

void serve_connection(Server& server, int fd, const std::atomic<bool>& stop) {
    auto session = server.new_session();
    std::string buffer;
    char chunk[4096];
    while (session.open() && !stop) {
        pollfd p{fd, POLLIN, 0};
        const int ready = ::poll(&p, 1, 100);
        if (ready < 0 && errno != EINTR) break;
        if (ready <= 0) continue;
        const auto n = ::recv(fd, chunk, sizeof chunk, 0);
        if (n <= 0) break;
        buffer.append(chunk, static_cast<std::size_t>(n));
        std::size_t newline;
        while (session.open() && (newline = buffer.find('\n')) != std::string::npos) {
            const auto line = buffer.substr(0, newline);
            buffer.erase(0, newline + 1);
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            send_all(fd, server.handle(session, line) + "\n");
        }
    }
    ::close(fd);
}

}  // namespace

Server::Server(ServerConfig config) : config_(std::move(config)), curriculum_(config_.curriculum) {
    config_.reward.validate();
}

Session Server::new_session() {
    Session s;
    s.id_ = sessions_++;
    return s;
}

json Server::reset(Session& session, const json& request) {
    const bool automatic = request.contains("curriculum");
    if (automatic && request.at("curriculum") != "auto")
        throw RequestError{"bad_request", "curriculum must be \"auto\""};
    const std::uint64_t index = session.next_id_++;
    const std::uint64_t seed = request.contains("seed") ? field<std::uint64_t>(request, "seed")
                                                        : derive_seed(config_.seed ^ mix64(session.id_), index);
    GameId game{};
    int level = 1;
    if (automatic) {
        std::lock_guard lock(curriculum_mutex_);
        if (request.contains("game")) {
            game = game_field(request);
            try {
                level = curriculum_.level(game);
            } catch (const ValidationError& e) {
                throw RequestError{"unknown_game", e.what()};
            }
        } else {
            Rng rng(mix64(seed));
            std::tie(game, level) = curriculum_.sample_task(rng);
        }
    } else {
        game = game_field(request);
        level = request.contains("level") ? field<int>(request, "level") : 1;
    }
    PuzzleInstance instance;
    try {
        instance = generate(game, level, seed);
    } catch (const ValidationError& e) {
        throw RequestError{"bad_request", e.what()};
    } catch (const GenerationExhausted& e) {
        throw RequestError{"generation_failed", e.what()};
    }
    const std::string id = "s" + std::to_string(session.id_) + "-e" + std::to_string(index);
    json response{{"episode_id", id}, {"prompt", instance.prompt}, {"game", to_string(game)}, {"level", level},
                  {"seed", seed}};
    session.episodes_[id] = {std::move(instance), automatic};
    return response;
}

json Server::score(Session& session, const json& request) {
    const auto id = field<std::string>(request, "episode_id");
    const auto transcript = field<std::string>(request, "transcript");
    const auto it = session.episodes_.find(id);
    if (it == session.episodes_.end()) throw RequestError{"unknown_episode", "no outstanding episode " + id};
    auto episode = std::move(it->second);
    session.episodes_.erase(it);
    auto rc = config_.reward;
    rc.game = episode.instance.game;
    const auto breakdown = reward::grade(episode.instance, transcript, rc);
    auto response = reward::record_json(episode.instance, breakdown);
    response["episode_id"] = id;
    if (episode.auto_curriculum) {
        std::lock_guard lock(curriculum_mutex_);
        const auto game = episode.instance.game;
        // An episode generated before an advance still counts toward the
        // level it was played at only if that level is still current.
        if (curriculum_.level(game) == episode.instance.level) curriculum_.record_episode(game, breakdown);
        const auto advance = curriculum_.maybe_advance(game);
        response["curriculum"] = json{{"level", advance.level}, {"advanced", advance.advanced}};
        if (advance.advanced)
            response["curriculum"]["event"] = curriculum::advance_event(game, advance.level - 1, advance.level, auto_episodes_);
        ++auto_episodes_;
    }
    return response;
}

std::string Server::handle(Session& session, std::string_view line) {
    json request;
    try {
        request = json::parse(line);
    } catch (const json::parse_error& e) {
        return error("bad_json", e.what()).dump();
    }
    if (!request.is_object()) return error("bad_request", "request must be a JSON object").dump();
    try {
        const auto cmd = field<std::string>(request, "cmd");
        if (cmd == "reset") return reset(session, request).dump();
        if (cmd == "score") return score(session, request).dump();
        if (cmd == "bye") {
            session.open_ = false;
            return json{{"bye", true}, {"outstanding", session.episodes_.size()}}.dump();
        }
        return error("unknown_cmd", "unknown command " + cmd).dump();
    } catch (const RequestError& e) {
        return error(e.code, e.msg).dump();
    } catch (const std::exception& e) {
        return error("internal", e.what()).dump();
    }
}

void Server::serve_stream(std::istream& in, std::ostream& out) {
    auto session = new_session();
    std::string line;
    while (session.open() && std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        out << handle(session, line) << '\n' << std::flush;
    }
}

void Server::serve_tcp(const std::string& host, std::uint16_t port, const std::atomic<bool>& stop,
                       const std::function<void(std::uint16_t)>& on_ready) {
    const int listener = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listener < 0) throw std::runtime_error(std::string("socket: ") + std::strerror(errno));
    const int yes = 1;
    ::setsockopt(listener, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
        ::close(listener);
        throw std::runtime_error("invalid IPv4 address " + host);
    }
    if (::bind(listener, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0 || ::listen(listener, 16) < 0) {
        const std::string why = std::strerror(errno);
        ::close(listener);
        throw std::runtime_error("bind/listen on " + host + ":" + std::to_string(port) + ": " + why);
    }
    socklen_t len = sizeof addr;
    ::getsockname(listener, reinterpret_cast<sockaddr*>(&addr), &len);
    if (on_ready) on_ready(ntohs(addr.sin_port));

    std::vector<std::thread> workers;
    while (!stop) {
        pollfd p{listener, POLLIN, 0};
        const int ready = ::poll(&p, 1, 100);
        if (ready <= 0) continue;
        const int fd = ::accept(listener, nullptr, nullptr);
        if (fd < 0) continue;
        workers.emplace_back(serve_connection, std::ref(*this), fd, std::cref(stop));
    }
    ::close(listener);
    for (auto& w : workers) w.join();
}

json Server::curriculum_checkpoint() const {
    std::lock_guard lock(curriculum_mutex_);
    return curriculum_.checkpoint();
}

}  // namespace pf::protocol
