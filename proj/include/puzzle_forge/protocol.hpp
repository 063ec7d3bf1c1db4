#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>

#include "puzzle_forge/curriculum.hpp"
#include "puzzle_forge/reward.hpp"

namespace pf::protocol {

// Line-delimited JSON. Requests:
//   {"cmd":"reset","game":G,"level":L,"seed":S}
//   {"cmd":"reset","curriculum":"auto"[,"game":G][,"seed":S]}
//   {"cmd":"score","episode_id":E,"transcript":T}
//   {"cmd":"bye"}
// Failures answer {"error":code,"msg":text} and keep the session open.
struct ServerConfig {
    reward::RewardConfig reward;
    curriculum::CurriculumConfig curriculum;
    std::uint64_t seed = 0;  // base of the seeds handed out when a reset omits one
};

class Server;

class Session {
public:
    bool open() const { return open_; }
    std::size_t outstanding() const { return episodes_.size(); }

private:
    friend class Server;
    struct Episode {
        PuzzleInstance instance;
        bool auto_curriculum = false;
    };
    std::map<std::string, Episode> episodes_;
    std::uint64_t next_id_ = 0;
    std::uint64_t id_ = 0;
    bool open_ = true;
};

class Server {
public:
    explicit Server(ServerConfig config);

    Session new_session();
    // One request line in, one response line out (without newline).
    std::string handle(Session& session, std::string_view line);

    // Serves one session until EOF or "bye".
    void serve_stream(std::istream& in, std::ostream& out);

    // Listens on host:port (0 picks a free port) with one thread per
    // connection. `on_ready` receives the bound port. Returns when `stop`
    // becomes true. Throws std::runtime_error on socket failures.
    void serve_tcp(const std::string& host, std::uint16_t port, const std::atomic<bool>& stop,
                   const std::function<void(std::uint16_t)>& on_ready = {});

    json curriculum_checkpoint() const;

private:
    json reset(Session& session, const json& request);
    json score(Session& session, const json& request);

    ServerConfig config_;
    mutable std::mutex curriculum_mutex_;
    curriculum::CurriculumState curriculum_;
    std::uint64_t auto_episodes_ = 0;
    std::atomic<std::uint64_t> sessions_{0};
};

}  // namespace pf::protocol
