#pragma once

#include <string>
#include <vector>

#include "liftdual/analysis.hpp"
#include "liftdual/grid.hpp"

namespace liftdual {

struct IoError : Error {
    using Error::Error;
};

// CSV with header x[,y],t,value, one row per inside cell (or face), 17 significant digits
void write_scalar_csv(const std::string& path, const ScalarField& v, const GridSpec& g, const DomainMask& mask);
ScalarField read_scalar_csv(const std::string& path, const GridSpec& g, const DomainMask& mask);

// component 0 = sigma^x, 1 = sigma^y, 2 = sigma^t; rows sit at face centres
void write_flux_csv(const std::string& path, const FluxField& s, int component, const GridSpec& g,
                    const DomainMask& mask);
void read_flux_csv(const std::string& path, FluxField& s, int component, const GridSpec& g);

// header x[,y],u
void write_profile_csv(const std::string& path, const Profile& u, const GridSpec& g);
Profile read_profile_csv(const std::string& path, const GridSpec& g, const DomainMask& mask);

struct Image {
    int width = 0;
    int height = 0;
    std::vector<double> pixels;  // row-major, top row first; NaN renders black
};
// binary P5, linear map of [min, max] to 0..255; min and max go to path + ".range"
void write_pgm(const std::string& path, const Image& img);
Image read_pgm(const std::string& path);

}  // namespace liftdual
