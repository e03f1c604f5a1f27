#include <gtest/gtest.h>

#include <sstream>

#include "honeytrap/decorate.hpp"
#include "honeytrap/errors.hpp"
#include "honeytrap/features.hpp"
#include "honeytrap/model_io.hpp"
#include "support.hpp"

using namespace honeytrap;
using namespace honeytrap::decorate;

namespace {

Ensemble small_model() {
    DecorateParams p;
    p.c_size = 4;
    p.i_max = 8;
    p.seed = 11;
    return train_decorate(fixtures::blobs(60, 3, 1.5, 4), p);
}

Ensemble reload(const std::string& text) {
    std::istringstream in(text);
    return load_model(in);
}

}  // namespace

TEST(ModelIo, SaveLoadIdentical) {
    const auto m = small_model();
    const auto text = model_to_string(m);
    const auto back = reload(text);
    EXPECT_EQ(back, m);
    EXPECT_EQ(model_to_string(back), text);
    const auto data = fixtures::blobs(60, 3, 1.5, 4);
    for (const auto& row : data.rows()) {
        EXPECT_EQ(back.predict(row), m.predict(row));
    }
}

TEST(ModelIo, HeaderLayout) {
    const auto text = model_to_string(small_model());
    EXPECT_EQ(text.rfind("honeytrap-model v1\nschema_hash ", 0), 0u);
    EXPECT_NE(text.find("\nmembers "), std::string::npos);
}

TEST(ModelIo, SchemaHashMismatchRejected) {
    auto text = model_to_string(small_model());
    const auto pos = text.find("schema_hash ") + 12;
    text[pos] = text[pos] == '0' ? '1' : '0';
    EXPECT_THROW((void)reload(text), ParseError);
}

TEST(ModelIo, Malformed) {
    const auto text = model_to_string(small_model());
    EXPECT_THROW((void)reload(""), ParseError);
    EXPECT_THROW((void)reload("honeytrap-model v2\n"), ParseError);
    EXPECT_THROW((void)reload(text.substr(0, text.size() / 2)), ParseError);
    for (std::size_t cut = 0; cut < text.size(); cut += 37) {
        EXPECT_THROW((void)reload(text.substr(0, cut)), ParseError) << cut;
    }
}

TEST(ModelIo, CompatibilityCheck) {
    const auto m = small_model();
    EXPECT_NO_THROW(check_compatible(m, fixtures::blobs(10, 3, 1.0, 9)));
    EXPECT_THROW(check_compatible(m, fixtures::blobs(10, 2, 1.0, 9)), TypeError);
    EXPECT_THROW(check_compatible(m, fixtures::numeric_dataset(3, {"p", "q"})), TypeError);
    EXPECT_EQ(schema_hash(fixtures::blobs(5, 3, 1.0, 1)), schema_hash(fixtures::blobs(7, 3, 2.0, 2)));
}
