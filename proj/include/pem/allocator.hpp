#pragma once

namespace pem {

// Keeps freed field buffers in the heap instead of returning them to the OS.
// Every step allocates and frees many buffers of the same size; with glibc's
// defaults each one is a fresh mmap and a round of page faults. No-op on
// other C libraries.
void retain_freed_memory() noexcept;

} // namespace pem
