#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>

#include "dickeqfi/compensated_sum.hpp"
#include "dickeqfi/format.hpp"
#include "dickeqfi/parallel.hpp"

using namespace dickeqfi;

TEST(Format, RoundTripsDoubles) {
  for (double v : {0.1, 1.0 / 3.0, 11.0 / 12.0, 1e-300, 6.02214076e23, -2.5}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
  EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(format_double(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_EQ(format_double(std::nan("")), "nan");
  EXPECT_EQ(format_double(0.25), "0.25");
}

TEST(Format, CsvWriter) {
  std::ostringstream os;
  CsvWriter csv(os);
  csv.comment("note");
  csv.header({"a", "b"});
  csv.row({1.0, 0.5});
  csv.row(std::vector<std::string>{"x", "y"});
  EXPECT_EQ(os.str(), "# note\na,b\n1,0.5\nx,y\n");
}

TEST(Format, ProvenanceLine) {
  const auto line = provenance_line();
  EXPECT_EQ(line.rfind("# dickeqfi " + version() + " generated ", 0), 0u);
  EXPECT_EQ(line.back(), 'Z');
}

TEST(CompensatedSum, RecoversLostLowBits) {
  CompensatedSum s;
  s.add(1.0);
  for (int k = 0; k < 1000; ++k) s.add(1e-16);
  s.add(-1.0);
  EXPECT_NEAR(s.value(), 1e-13, 1e-24);
  CompensatedComplexSum z;
  z += {1.0, -1.0};
  z += {1e-17, 1e-17};
  z += {-1.0, 1.0};
  EXPECT_NEAR(z.value().real(), 1e-17, 1e-30);
  EXPECT_NEAR(z.value().imag(), 1e-17, 1e-30);
}

TEST(Parallel, EveryIndexOnceAndOrdered) {
  for (int jobs : {1, 2, 7}) {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), jobs, [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) ASSERT_EQ(h.load(), 1);
    const auto sq = parallel_map<long>(100, jobs, [](std::size_t i) { return long(i * i); });
    for (std::size_t i = 0; i < sq.size(); ++i) ASSERT_EQ(sq[i], long(i * i));
  }
  EXPECT_EQ(resolve_jobs(3), 3);
  EXPECT_GE(resolve_jobs(0), 1);
}

TEST(Parallel, PropagatesExceptions) {
  EXPECT_THROW(parallel_for(50, 4,
                            [](std::size_t i) {
                              if (i == 17) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
}
