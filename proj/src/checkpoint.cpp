#include "seqsparse/checkpoint.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace seqsparse {

using nlohmann::json;

void save_checkpoint(const ModelParams& p, const std::string& dir, std::size_t epoch,
                     std::uint64_t seed) {
    std::filesystem::create_directories(dir);
    auto refs = param_refs(const_cast<ModelParams&>(p));

    json j;
    j["format"] = "seqsparse-checkpoint-v1";
    j["variant"] = variant_name(p.variant);
    j["dims"] = {{"n", p.n}, {"n0", p.n0}, {"h", p.h}, {"d", p.d}};
    j["epoch"] = epoch;
    j["seed"] = seed;
    json scalars = json::object();
    json tensors = json::array();
    for (const auto& r : refs) {
        if (r.size() == 1)
            scalars[r.name] = *r.data;
        else
            tensors.push_back({{"name", r.name}, {"rows", r.rows}, {"cols", r.cols}});
    }
    j["scalars"] = scalars;
    j["tensors"] = tensors;

    std::ofstream mf(dir + "/checkpoint.json");
    if (!mf) throw std::runtime_error("checkpoint: cannot write " + dir + "/checkpoint.json");
    mf << j.dump(2) << "\n";

    std::ofstream bf(dir + "/checkpoint.bin", std::ios::binary);
    if (!bf) throw std::runtime_error("checkpoint: cannot write " + dir + "/checkpoint.bin");
    for (const auto& r : refs) {
        if (r.size() == 1) continue;
        bf.write(reinterpret_cast<const char*>(r.data),
                 static_cast<std::streamsize>(r.size() * sizeof(double)));
    }
}

Checkpoint load_checkpoint(const std::string& dir) {
    std::ifstream mf(dir + "/checkpoint.json");
    if (!mf) throw std::runtime_error("checkpoint: cannot open " + dir + "/checkpoint.json");
    json j;
    mf >> j;

    const auto variant = variant_from_name(j.at("variant").get<std::string>());
    const auto& dims = j.at("dims");

    Checkpoint ck;
    ck.epoch = j.at("epoch").get<std::size_t>();
    ck.seed = j.at("seed").get<std::uint64_t>();
    // Shape the container via the initializer, then overwrite every live
    // parameter from the manifest and sidecar.
    ck.params = init_params(variant, dims.at("n").get<std::size_t>(),
                            dims.at("n0").get<std::size_t>(), dims.at("h").get<std::size_t>(),
                            dims.at("d").get<std::size_t>(), ck.seed);

    auto refs = param_refs(ck.params);
    const auto& scalars = j.at("scalars");
    const auto& tensors = j.at("tensors");

    std::ifstream bf(dir + "/checkpoint.bin", std::ios::binary);
    if (!bf) throw std::runtime_error("checkpoint: cannot open " + dir + "/checkpoint.bin");

    std::size_t ti = 0;
    for (auto& r : refs) {
        if (r.size() == 1) {
            *r.data = scalars.at(r.name).get<double>();
            continue;
        }
        require(ti < tensors.size(), "checkpoint: tensor table shorter than parameter set");
        const auto& entry = tensors[ti++];
        require(entry.at("name").get<std::string>() == r.name &&
                    entry.at("rows").get<std::size_t>() == r.rows &&
                    entry.at("cols").get<std::size_t>() == r.cols,
                "checkpoint: tensor table mismatch at " + r.name);
        bf.read(reinterpret_cast<char*>(r.data),
                static_cast<std::streamsize>(r.size() * sizeof(double)));
        if (static_cast<std::size_t>(bf.gcount()) != r.size() * sizeof(double))
            throw std::runtime_error("checkpoint: truncated checkpoint.bin at " + r.name);
    }
    require(ti == tensors.size(), "checkpoint: tensor table longer than parameter set");
    return ck;
}

}  // namespace seqsparse
