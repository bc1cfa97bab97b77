// Copyright 2026 The enftest Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "enftest/ripper.h"

#include <gtest/gtest.h>

#include "test_util.h"

namespace enftest {
namespace {

using testing::kOpen;
using testing::kPause;
using testing::kRelease;

const EventList kCameraAlphabet = {kOpen, kRelease, kPause};

std::string SignatureOf(const AppSpec& spec, const std::string& id) {
  return ComputeSignature(spec.states.at(id));
}

TEST(RipTest, CompliantFixture) {
  const auto spec = testing::CompliantApp();
  SimulatedApp app(spec);
  const auto gui = Rip(app, kCameraAlphabet, 100);
  EXPECT_EQ(gui.nodes.size(), 4u);
  EXPECT_EQ(gui.edges.size(), 4u);
  EXPECT_EQ(gui.initial, SignatureOf(*spec, "Dialog1"));

  const auto main = SignatureOf(*spec, "Main");
  const auto launcher = SignatureOf(*spec, "Launcher");
  bool found = false;
  for (const auto& e : gui.edges) {
    if (e.from == main && e.to == launcher) {
      EXPECT_EQ(e.annotation, (EventList{kRelease, kPause}));
      found = true;
    }
    // onResume is outside the alphabet and must not appear.
    for (const auto& ev : e.annotation) EXPECT_NE(ev, "activity.onResume");
  }
  EXPECT_TRUE(found);
  EXPECT_EQ(gui.log.at(main),
            (ActionPath{UiAction::Touch("Allow"), UiAction::Touch("Allow")}));
}

TEST(RipTest, EmptyAlphabetGivesEmptyAnnotations) {
  SimulatedApp app(testing::LeakyApp());
  const auto gui = Rip(app, {}, 100);
  EXPECT_EQ(gui.nodes.size(), 4u);
  for (const auto& e : gui.edges) EXPECT_TRUE(e.annotation.empty());
}

TEST(RipTest, BudgetLimitsExploration) {
  SimulatedApp app(testing::LeakyApp());
  const auto gui = Rip(app, kCameraAlphabet, 1);
  EXPECT_EQ(gui.nodes.size(), 2u);
  EXPECT_EQ(gui.edges.size(), 1u);
  EXPECT_THROW(Rip(app, kCameraAlphabet, 0), std::invalid_argument);
}

TEST(RipTest, EdgesAreSound) {
  const auto spec = testing::LeakyApp();
  SimulatedApp app(spec);
  const auto gui = Rip(app, kCameraAlphabet, 100);
  for (const auto& e : gui.edges) {
    SimulatedApp probe(spec);
    GuiState s = probe.Reset().state;
    for (const auto& a : gui.log.at(e.from)) s = probe.Perform(a).next;
    ASSERT_EQ(s.signature, e.from);
    const auto r = probe.Perform(e.action);
    EXPECT_EQ(r.next.signature, e.to);
    EXPECT_EQ(FilterToAlphabet(r.emitted, kCameraAlphabet), e.annotation);
  }
}

TEST(RipTest, Deterministic) {
  SimulatedApp a(testing::LeakyApp());
  SimulatedApp b(testing::LeakyApp());
  EXPECT_EQ(ExportGuiModel(Rip(a, kCameraAlphabet, 100)),
            ExportGuiModel(Rip(b, kCameraAlphabet, 100)));
}

TEST(RipTest, NoActionsGivesSingleNode) {
  auto spec = std::make_shared<AppSpec>(*testing::LeakyApp());
  spec->transitions.clear();
  SimulatedApp app(spec);
  const auto gui = Rip(app, kCameraAlphabet, 10);
  EXPECT_EQ(gui.nodes.size(), 1u);
  EXPECT_TRUE(gui.edges.empty());
}

// Returns a different first screen on every other reset.
class FlakyDriver : public AppDriver {
 public:
  explicit FlakyDriver(std::shared_ptr<const AppSpec> spec) : inner_(spec) {}
  LaunchResult Reset() override {
    auto r = inner_.Reset();
    if (++resets_ % 2 == 0) r.state = inner_.Perform(UiAction::Touch("Allow")).next;
    return r;
  }
  std::vector<UiAction> AvailableActions(const GuiState& s) const override {
    return inner_.AvailableActions(s);
  }
  StepResult Perform(const UiAction& a) override { return inner_.Perform(a); }

 private:
  SimulatedApp inner_;
  int resets_ = 0;
};

TEST(RipTest, NondeterministicDriverIsReported) {
  FlakyDriver driver(testing::LeakyApp());
  EXPECT_THROW(Rip(driver, kCameraAlphabet, 100), RipError);
}

TEST(GuiModelIoTest, RoundTrip) {
  SimulatedApp app(testing::CompliantApp());
  const auto gui = Rip(app, kCameraAlphabet, 100);
  const auto text = ExportGuiModel(gui);
  EXPECT_EQ(ImportGuiModel(text), gui);
  EXPECT_EQ(ExportGuiModel(ImportGuiModel(text)), text);
}

TEST(GuiModelIoTest, TruncatedFileIsAnError) {
  SimulatedApp app(testing::CompliantApp());
  const auto text = ExportGuiModel(Rip(app, kCameraAlphabet, 100));
  EXPECT_ANY_THROW(ImportGuiModel(text.substr(0, text.size() / 2)));
  EXPECT_ANY_THROW(ImportGuiModel("{}"));
}

}  // namespace
}  // namespace enftest
