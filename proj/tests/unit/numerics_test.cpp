#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "mcg/errors.hpp"
#include "mcg/numerics/adam.hpp"
#include "mcg/numerics/checkpoint.hpp"
#include "mcg/numerics/gradcheck.hpp"
#include "mcg/numerics/layers.hpp"
#include "mcg/numerics/matrix.hpp"
#include "mcg/verify/oracles.hpp"

namespace mcg {
namespace {

Matrix random_matrix(std::size_t r, std::size_t c, Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix m(r, c);
  for (auto& v : m.data()) v = u(rng);
  return m;
}

TEST(Matmul, IdentityLeavesOperandUnchanged) {
  Matrix b{{1, 2}, {3, 4}};
  EXPECT_EQ(matmul(Matrix::identity(2), b), b);
}

TEST(Matmul, DisjointSupportGivesZero) {
  Matrix a{{1, 0}, {0, 0}};
  Matrix b{{0, 0}, {1, 0}};
  EXPECT_EQ(matmul(a, b), Matrix(2, 2));
}

TEST(Matmul, MatchesTripleLoopOracle) {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix a = random_matrix(4, 3, rng);
    Matrix b = random_matrix(3, 5, rng);
    Matrix ref = oracle::naive_matmul(a, b);
    EXPECT_LE(max_abs(matmul(a, b) - ref), 1e-12);
    EXPECT_LE(max_abs(matmul_tn(transpose(a), b) - ref), 1e-12);
    EXPECT_LE(max_abs(matmul_nt(a, transpose(b)) - ref), 1e-12);
  }
}

TEST(Matmul, LargerShapesMatchOracle) {
  Rng rng(8);
  Matrix a = random_matrix(37, 19, rng);
  Matrix b = random_matrix(19, 23, rng);
  EXPECT_LE(max_abs(matmul(a, b) - oracle::naive_matmul(a, b)), 1e-12);
}

TEST(Matmul, ShapeMismatchNamesBothShapes) {
  try {
    matmul(Matrix(2, 3), Matrix(2, 3));
    FAIL() << "expected DimensionError";
  } catch (const DimensionError& e) {
    std::string msg = e.what();
    EXPECT_NE(msg.find("2x3"), std::string::npos) << msg;
  }
}

TEST(Matrix, BlocksAndConcat) {
  Matrix a{{1, 2, 3}, {4, 5, 6}};
  EXPECT_EQ(column_block(a, 1, 2), (Matrix{{2, 3}, {5, 6}}));
  EXPECT_EQ(row_block(a, 1, 1), (Matrix{{4, 5, 6}}));
  std::vector<Matrix> parts{Matrix{{1}, {4}}, Matrix{{2, 3}, {5, 6}}};
  EXPECT_EQ(hconcat(parts), a);
  EXPECT_EQ(column_sums(a), (Matrix{{5, 7, 9}}));
  EXPECT_THROW(require_finite(Matrix{{NAN}}, "x"), NumericError);
}

TEST(Softmax, Symmetric) {
  std::vector<double> v{0.0, 0.0};
  auto s = softmax(v);
  EXPECT_DOUBLE_EQ(s[0], 0.5);
  EXPECT_DOUBLE_EQ(s[1], 0.5);
}

TEST(Softmax, LogThree) {
  std::vector<double> v{std::log(3.0), 0.0};
  auto s = softmax(v);
  EXPECT_NEAR(s[0], 0.75, 1e-15);
  EXPECT_NEAR(s[1], 0.25, 1e-15);
}

TEST(Softmax, LargeLogitsDoNotOverflow) {
  std::vector<double> v{1000.0, 0.0};
  auto s = softmax(v);
  EXPECT_TRUE(std::isfinite(s[0]) && std::isfinite(s[1]));
  EXPECT_NEAR(s[0], 1.0, 1e-15);
  EXPECT_NEAR(s[1], 0.0, 1e-15);
}

TEST(Softmax, EmptyThrows) { EXPECT_THROW(softmax({}), ArgumentError); }

TEST(Linear, IdentityWeights) {
  Rng rng(1);
  Linear lin("l", 2, 2, rng);
  lin.weight().value = Matrix::identity(2);
  lin.bias().value.set_zero();
  EXPECT_EQ(lin.forward(Matrix{{2, 3}}), (Matrix{{2, 3}}));
}

TEST(Linear, ZeroInputBroadcastsBias) {
  Rng rng(1);
  Linear lin("l", 3, 2, rng);
  lin.bias().value = Matrix{{0.5, -1.5}};
  Matrix y = lin.forward(Matrix(4, 3));
  for (std::size_t r = 0; r < 4; ++r) {
    EXPECT_EQ(y(r, 0), 0.5);
    EXPECT_EQ(y(r, 1), -1.5);
  }
}

TEST(Linear, BackwardWithoutForwardThrows) {
  Rng rng(1);
  Linear lin("l", 3, 2, rng);
  EXPECT_THROW(lin.backward(Matrix(1, 2)), StateError);
}

TEST(Linear, GradientsMatchFiniteDifferences) {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    Linear lin("l", 4, 2, rng);
    Matrix x = random_matrix(3, 4, rng);
    Matrix w = random_matrix(3, 2, rng);
    auto loss = [&](bool with_grad) {
      Matrix y = lin.forward(x);
      double l = sum(hadamard(y, w));
      if (with_grad) lin.backward(w);
      else lin.clear_cache();
      return l;
    };
    auto res = finite_diff_check(loss, lin.parameters());
    EXPECT_LT(res.max_rel_error, 1e-6);
  }
}

TEST(Gru, ZeroParamsGiveZeroState) {
  Rng rng(1);
  GruCell gru("g", 3, 4, rng);
  for (auto* p : gru.parameters()) p->value.set_zero();
  Matrix h = gru.forward(Matrix(2, 3, 1.0), Matrix(2, 4));
  EXPECT_EQ(h, Matrix(2, 4));
}

TEST(Gru, DimensionMismatchThrows) {
  Rng rng(1);
  GruCell gru("g", 3, 4, rng);
  EXPECT_THROW(gru.forward(Matrix(2, 2), Matrix(2, 4)), DimensionError);
  EXPECT_THROW(gru.forward(Matrix(2, 3), Matrix(3, 4)), DimensionError);
}

TEST(Gru, SequenceGradientsMatchFiniteDifferences) {
  Rng rng(5);
  GruCell gru("g", 3, 4, rng);
  std::vector<Matrix> xs;
  for (int t = 0; t < 3; ++t) xs.push_back(random_matrix(2, 3, rng));
  Matrix w = random_matrix(2, 4, rng);
  auto loss = [&](bool with_grad) {
    Matrix h(2, 4);
    for (const auto& x : xs) h = gru.forward(x, h);
    double l = sum(hadamard(h, w));
    if (with_grad) {
      Matrix dh = w;
      for (std::size_t t = 0; t < xs.size(); ++t) dh = gru.backward(dh).dh_prev;
    } else {
      gru.clear_cache();
    }
    return l;
  };
  EXPECT_LT(finite_diff_check(loss, gru.parameters()).max_rel_error, 1e-6);
}

TEST(Adam, ZeroGradientLeavesParameterUnchanged) {
  Rng rng(1);
  Parameter p("p", random_matrix(2, 2, rng));
  Matrix before = p.value;
  Adam opt({&p}, AdamConfig{});
  opt.step();
  EXPECT_EQ(p.value, before);
}

TEST(Adam, FirstStepMovesByLearningRate) {
  Parameter p("p", Matrix{{1.0, -2.0}});
  p.grad = Matrix{{3.0, -0.5}};
  AdamConfig cfg;
  cfg.lr = 0.01;
  cfg.beta1 = 0.0;
  cfg.beta2 = 0.0;
  cfg.eps = 0.0;
  Adam opt({&p}, cfg);
  opt.step();
  EXPECT_NEAR(p.value(0, 0), 1.0 - 0.01, 1e-15);
  EXPECT_NEAR(p.value(0, 1), -2.0 + 0.01, 1e-15);
}

TEST(Adam, CountMismatchThrows) {
  Parameter p("p", Matrix(1, 1));
  std::vector<Parameter*> params{&p};
  std::vector<AdamState> states;
  EXPECT_THROW(adam_step(params, states, AdamConfig{}), ArgumentError);
}

TEST(GradCheck, SumOfEntries) {
  Rng rng(2);
  Parameter p("p", random_matrix(3, 3, rng));
  auto f = [&](bool with_grad) {
    if (with_grad) p.grad += Matrix(3, 3, 1.0);
    return sum(p.value);
  };
  EXPECT_LT(finite_diff_check(f, {&p}).max_rel_error, 1e-10);
}

TEST(GradCheck, HalfSquaredNorm) {
  Rng rng(2);
  Parameter p("p", random_matrix(3, 2, rng));
  auto f = [&](bool with_grad) {
    if (with_grad) p.grad += p.value;
    return 0.5 * squared_norm(p.value);
  };
  EXPECT_LT(finite_diff_check(f, {&p}).max_rel_error, 1e-9);
}

TEST(GradCheck, NonFiniteLossThrows) {
  Parameter p("p", Matrix(1, 1));
  auto f = [](bool) { return std::nan(""); };
  EXPECT_THROW(finite_diff_check(f, {&p}), NumericError);
}

TEST(GradClip, RescalesToMaxNorm) {
  Parameter a("a", Matrix(1, 2));
  a.grad = Matrix{{3.0, 4.0}};
  ParameterList params{&a};
  EXPECT_DOUBLE_EQ(clip_grad_norm(params, 1.0), 5.0);
  EXPECT_NEAR(grad_global_norm(params), 1.0, 1e-15);
}

class CheckpointTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("mcg_ckpt_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  std::filesystem::path dir_;
};

TEST_F(CheckpointTest, RoundTripIsBitwise) {
  Rng rng(4);
  Parameter a("a", random_matrix(3, 2, rng));
  Parameter b("b", random_matrix(1, 5, rng));
  save_checkpoint(dir_ / "c.bin", {&a, &b});
  auto loaded = load_checkpoint(dir_ / "c.bin");
  ASSERT_EQ(loaded.size(), 2u);
  EXPECT_EQ(loaded[0].name, "a");
  EXPECT_EQ(loaded[0].value, a.value);
  EXPECT_EQ(loaded[1].value, b.value);

  Parameter a2("a", Matrix(3, 2));
  Parameter b2("b", Matrix(1, 5));
  restore_parameters({&a2, &b2}, loaded);
  EXPECT_EQ(a2.value, a.value);
}

TEST_F(CheckpointTest, TruncatedAndCorruptFilesThrow) {
  Rng rng(4);
  Parameter a("a", random_matrix(3, 2, rng));
  save_checkpoint(dir_ / "c.bin", {&a});
  auto size = std::filesystem::file_size(dir_ / "c.bin");
  std::filesystem::resize_file(dir_ / "c.bin", size - 5);
  EXPECT_THROW(load_checkpoint(dir_ / "c.bin"), CheckpointError);

  std::ofstream(dir_ / "bad.bin") << "NOTACHECKPOINT";
  EXPECT_THROW(load_checkpoint(dir_ / "bad.bin"), CheckpointError);
  EXPECT_THROW(load_checkpoint(dir_ / "missing.bin"), CheckpointError);
}

TEST_F(CheckpointTest, MismatchedShapeThrows) {
  Parameter a("a", Matrix(2, 2, 1.0));
  save_checkpoint(dir_ / "c.bin", {&a});
  Parameter wrong("a", Matrix(2, 3));
  EXPECT_THROW(restore_parameters({&wrong}, load_checkpoint(dir_ / "c.bin")), CheckpointError);
  Parameter renamed("z", Matrix(2, 2));
  EXPECT_THROW(restore_parameters({&renamed}, load_checkpoint(dir_ / "c.bin")), CheckpointError);
}

}  // namespace
}  // namespace mcg
