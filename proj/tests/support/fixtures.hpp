#pragma once

#include "ioscm/adjustment.hpp"
#include "ioscm/dmg.hpp"

namespace fixtures {

using ioscm::Dmg;
using ioscm::DmgBuilder;

inline Dmg chain() { return DmgBuilder().output("a").output("b").output("c").path({"a", "b", "c"}).build(); }

inline Dmg collider() {
  return DmgBuilder().output("a").output("b").output("c").edge("a", "b").edge("c", "b").build();
}

// x → y ⇄ z
inline Dmg chain_into_cycle() {
  return DmgBuilder().output("x").output("y").output("z").edge("x", "y").edge("y", "z").edge("z", "y").build();
}

// x → y ⇄ z → w
inline Dmg cycle_with_tail() {
  return DmgBuilder()
      .output("x").output("y").output("z").output("w")
      .edge("x", "y").edge("y", "z").edge("z", "y").edge("z", "w")
      .build();
}

inline Dmg bow() { return DmgBuilder().output("X").output("Y").edge("X", "Y").bi("X", "Y").build(); }

inline Dmg backdoor() {
  return DmgBuilder().output("X").output("Y").output("Z").edge("Z", "X").edge("X", "Y").edge("Z", "Y").build();
}

inline Dmg front_door() {
  return DmgBuilder().output("X").output("Y").output("Z").edge("X", "Z").edge("Z", "Y").bi("X", "Y").build();
}

// v1 → v3, v2 → v4, v1 ↔ v4, v2 ↔ v3
inline Dmg crossed_districts() {
  return DmgBuilder()
      .output("v1").output("v2").output("v3").output("v4")
      .edge("v1", "v3").edge("v2", "v4").bi("v1", "v4").bi("v2", "v3")
      .build();
}

// The running example: a cycle Z0 → L1 → W → Z0 upstream of the treatment X,
// selection node S below Z1, and L1 ↔ Y. The indicator I_X is added by
// extend() where needed.
inline Dmg running_example() {
  return DmgBuilder()
      .output("C").output("L1").output("L2").output("S").output("W")
      .output("X").output("Y").output("Z0").output("Z1").output("Z2")
      .edge("X", "Z1").edge("X", "Y").edge("Z1", "Z2").edge("C", "Z0").edge("Z0", "X")
      .edge("Z0", "L1").edge("L1", "W").edge("W", "Z0").edge("Z1", "S").edge("L2", "Y").edge("L2", "Z2")
      .bi("L1", "Y")
      .build();
}

inline ioscm::AdjustmentSpec running_example_roles() {
  ioscm::AdjustmentSpec spec;
  spec.y = {"Y"};
  spec.x = {"X"};
  spec.c = {"C"};
  spec.s = {"S"};
  spec.z0 = {"Z0"};
  spec.zplus = {"Z1", "Z2"};
  spec.l = {"L1", "L2"};
  return spec;
}

}  // namespace fixtures
