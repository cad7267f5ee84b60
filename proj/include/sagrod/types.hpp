#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <numbers>
#include <stdexcept>
#include <string>

namespace sagrod {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using VecX = Eigen::VectorXd;
using Mat3 = Eigen::Matrix3d;
using Vec11 = Eigen::Matrix<double, 11, 1>;
using Mat4x11 = Eigen::Matrix<double, 4, 11>;
using Mat11 = Eigen::Matrix<double, 11, 11>;
using SparseMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

inline constexpr double kPi = std::numbers::pi;

// Guard on 1 + t_{i-1}.t_i; below this the curvature binormal blows up.
inline constexpr double kTangentGuard = 1e-6;

// Edges shorter than this are degenerate.
inline constexpr double kMinEdgeLength = 1e-12;

struct MaterialParams {
    double rho = 1e3;        // kg/m^3
    double radius = 1e-3;    // m
    double c_stretch = 1e8;  // kg/(m s^2)
    double c_bend = 1e8;
    double c_twist = 1e8;

    double area() const { return kPi * radius * radius; }
    // Stiffness prefactors of the three elastic terms.
    double stretch_stiffness() const { return c_stretch * area(); }
    double bend_stiffness() const { return c_bend * kPi * std::pow(radius, 4); }
    double twist_stiffness() const { return c_twist * kPi * std::pow(radius, 4); }

    // Boundary validation (file/config/C API); in-core math tolerates zero
    // stiffness, which some sanity tests rely on.
    void validate() const;
};

class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class DegenerateEdge : public Error {
  public:
    DegenerateEdge(int edge, double length);
    int edge = -1;
};

class TangentReversal : public Error {
  public:
    explicit TangentReversal(int vertex);
    int vertex = -1;
};

class NonPositiveRestLength : public Error {
  public:
    NonPositiveRestLength(int edge, double value);
    int edge = -1;
};

class ValidationError : public Error {
  public:
    explicit ValidationError(const std::string& what) : Error(what) {}
};

class ParseError : public Error {
  public:
    ParseError(const std::string& what, int line);
    int line = 0;
};

class SolveFailure : public Error {
  public:
    explicit SolveFailure(const std::string& what) : Error(what) {}
};

class IoError : public Error {
  public:
    explicit IoError(const std::string& what) : Error(what) {}
};

class UnknownScenario : public Error {
  public:
    explicit UnknownScenario(const std::string& name);
};

}  // namespace sagrod
