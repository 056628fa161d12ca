#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace bnswarm {

// One (turn, run) command: rotate in place by turn_angle, then drive straight
// for straight_ticks control ticks.
struct MotionCommand {
  std::int64_t straight_ticks = 0;
  double turn_angle = 0.0;  // radians, in [-pi, pi]

  friend bool operator==(const MotionCommand&, const MotionCommand&) = default;
};

// Thrown by BooleanNetwork::deserialize with the 1-based line number of the
// offending input line.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

// Non-homogeneous Boolean network. Wiring lives in an N x N connection matrix
// whose entry (node, source) describes the edge source -> node: 0 none,
// 1 plain, 2 negated. Logic lives in an N x (N-1) gate matrix with entries
// 0 = AND, 1 = OR, 2 = XOR. On a synchronous step a node with in-degree K
// takes its inputs in ascending source index (negating where the edge says
// so) and folds them left to right through the first K-1 gates of its row;
// gate entries at or beyond slot K-1 never influence the dynamics. A node
// with one input copies it, a node with no inputs holds its state.
//
// The node vector is split in two halves for motion decoding: the low-index
// half reads as an unsigned binary number (node 0 is the most significant
// bit) giving the straight duration in ticks, and the high-index half maps
// affinely onto [-pi, pi] to give the turning angle.
class BooleanNetwork {
 public:
  BooleanNetwork(int size, std::vector<std::uint8_t> connections,
                 std::vector<std::uint8_t> gates,
                 std::vector<std::uint8_t> states);

  // Uniform random network: every connection and gate entry drawn from
  // {0,1,2}, every state bit fair. Draw order is fixed (connections row by
  // row, then gates row by row, then states) so a seed pins the network
  // exactly.
  static BooleanNetwork random(int size, std::uint64_t seed);

  int size() const noexcept { return n_; }

  std::uint8_t connection(int node, int source) const {
    return connections_[static_cast<std::size_t>(node) * n_ + source];
  }
  std::uint8_t gate(int node, int slot) const {
    return gates_[static_cast<std::size_t>(node) * (n_ - 1) + slot];
  }
  bool state(int node) const { return states_[node] != 0; }
  const std::vector<std::uint8_t>& states() const noexcept { return states_; }
  const std::vector<std::uint8_t>& connections() const noexcept { return connections_; }
  const std::vector<std::uint8_t>& gates() const noexcept { return gates_; }

  void set_connection(int node, int source, std::uint8_t value);
  void set_gate(int node, int slot, std::uint8_t value);
  void set_state(int node, bool value) { states_[node] = value ? 1 : 0; }
  void set_states(const std::vector<std::uint8_t>& states);

  int in_degree(int node) const;

  // Synchronous update: all new states are computed from the current vector
  // before any node is overwritten.
  void step();

  // States packed into one word, bit i = node i. Only valid because size is
  // capped at 64.
  std::uint64_t states_packed() const noexcept;
  void set_states_packed(std::uint64_t bits) noexcept;
  std::uint64_t step_packed(std::uint64_t bits) const;

  MotionCommand decode_motion() const;

  // Text form: header "bn <N>", N connection rows, N gate rows, one line of
  // N state bits. Round-trips bit-exactly.
  std::string serialize() const;
  static BooleanNetwork deserialize(const std::string& text);

  friend bool operator==(const BooleanNetwork& a, const BooleanNetwork& b) {
    return a.n_ == b.n_ && a.connections_ == b.connections_ &&
           a.gates_ == b.gates_ && a.states_ == b.states_;
  }

 private:
  void ensure_plan() const;

  int n_;
  std::vector<std::uint8_t> connections_;  // n * n, row-major by target node
  std::vector<std::uint8_t> gates_;        // n * (n - 1), row-major
  std::vector<std::uint8_t> states_;       // n

  // Compiled update plan: per node, the list of (source << 1 | negate)
  // inputs and the gates actually consulted. Rebuilt lazily after any
  // topology edit.
  mutable std::vector<std::uint32_t> plan_inputs_;
  mutable std::vector<std::uint8_t> plan_gates_;
  mutable std::vector<std::uint32_t> plan_input_off_;  // n + 1 entries
  mutable std::vector<std::uint32_t> plan_gate_off_;   // n + 1 entries
  mutable bool plan_valid_ = false;
  mutable std::vector<std::uint8_t> scratch_;
};

}  // namespace bnswarm
