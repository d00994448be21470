// Copyright 2026 The rtbench Authors
// SPDX-License-Identifier: Apache-2.0

// The ten-variant cross-runtime matrix: native musl/glibc binaries, a Wasm
// module under two runtimes in interpreted and precompiled form, and the
// same artifacts wrapped in container-engine invocations. Binaries are
// expected next to the working directory as <benchmark>.musl, .libc,
// .wasm, .wasm.so (wasmedgec output) and .cwasm (wasmtime compile output);
// images as localhost/<benchmark>:{musl,gnu,wasm}.

#pragma once

#include <array>
#include <fmt/format.h>
#include <optional>
#include <string>
#include <string_view>

namespace rtbench {

struct PresetWorkload {
  std::string_view name;   // benchmark program name
  std::string_view title;
  std::string_view params;  // appended to every command
  unsigned warmups;
  unsigned iterations;
};

inline constexpr std::array<PresetWorkload, 3> kPresetWorkloads{{
    {"noop", "Benchmark results for startup (noop)", "", 5, 50},
    {"mtree", "Benchmark results for Merkle Trees (n=18)", "18", 5, 50},
    {"deargon", "Benchmark results for Argon2 hasher (deargon)", "JGFyZ29uMmkkdj0xOSRtPTQwOTYsdD0zLHA9MSRjMkZzZEhsek5HeDAka3dZUUtYM2grNHVvV0Z3MVNPYUY2dw== 3", 2, 50},
}};

inline std::optional<PresetWorkload> find_preset(std::string_view name) {
  for (const auto& w : kPresetWorkloads)
    if (w.name == name) return w;
  return std::nullopt;
}

/// Config text for the full matrix running workload `w`.
inline std::string preset_config(const PresetWorkload& w) {
  const std::string b(w.name);
  const std::string args = w.params.empty() ? std::string() : " " + std::string(w.params);
  auto variant = [&](std::string_view name, const std::string& command) {
    return fmt::format("[variant]\nname    = {}\ncommand = {}{}\n\n", name, command, args);
  };
  std::string out = fmt::format(
      "# {} across native, Wasm and container execution variants.\n"
      "title      = {}\n"
      "warmups    = {}\n"
      "iterations = {}\n"
      "prepare    = sync; echo 3 > /proc/sys/vm/drop_caches\n"
      "high_priority = true\n"
      "cpu_set    = 24-47\n"
      "outputs    = markdown, csv, json, boxplot\n"
      "output_dir = results/{}\n\n",
      b, w.title, w.warmups, w.iterations, b);
  out += variant("Podman x86-musl", "podman run --rm localhost/" + b + ":musl");
  out += variant("Podman x86-gnu", "podman run --rm localhost/" + b + ":gnu");
  out += variant("Podman WasmEdge", "podman run --rm --annotation run.oci.handler=wasmedge localhost/" + b + ":wasm");
  out += variant("Podman Wasmtime", "podman run --rm --annotation run.oci.handler=wasmtime localhost/" + b + ":wasm");
  out += variant("Native x86-musl", "./" + b + ".musl");
  out += variant("Native x86-gnu", "./" + b + ".libc");
  out += variant("WasmEdge", "wasmedge ./" + b + ".wasm");
  out += variant("WasmEdge opt.", "wasmedge ./" + b + ".wasm.so");
  out += variant("Wasmtime", "wasmtime ./" + b + ".wasm");
  out += variant("Wasmtime opt.", "wasmtime run --allow-precompiled ./" + b + ".cwasm");
  out.pop_back();  // single trailing newline
  return out;
}

}  // namespace rtbench
