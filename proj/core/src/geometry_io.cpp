// Copyright (c) The arbilomod contributors.
// SPDX-License-Identifier: Apache-2.0

#include "arbilomod/geometry_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>

#include "arbilomod/common.hpp"
#include "arbilomod/text_util.hpp"

namespace arbilomod
{

namespace
{

double to_double(const std::string &w, const std::string &where)
{
  try
  {
    std::size_t used = 0;
    const double v = std::stod(w, &used);
    if (used != w.size())
    {
      throw std::invalid_argument(w);
    }
    return v;
  }
  catch (const std::exception &)
  {
    throw InvalidInput(fmt::format("{}: '{}' is not a number", where, w));
  }
}

Rect parse_rect(const std::string &value, const std::string &where)
{
  const auto w = text::words(value);
  if (w.size() != 4)
  {
    throw InvalidInput(fmt::format("{}: rectangle needs four numbers x0 y0 x1 y1", where));
  }
  Rect r{to_double(w[0], where), to_double(w[1], where), to_double(w[2], where),
         to_double(w[3], where)};
  if (r.degenerate())
  {
    throw InvalidInput(fmt::format("{}: degenerate rectangle", where));
  }
  return r;
}

SideSet parse_sides(const std::string &value, const std::string &where)
{
  SideSet sides;
  for (const auto &w : text::words(value))
  {
    if (w == "left")
    {
      sides.insert(Side::left);
    }
    else if (w == "right")
    {
      sides.insert(Side::right);
    }
    else if (w == "bottom")
    {
      sides.insert(Side::bottom);
    }
    else if (w == "top")
    {
      sides.insert(Side::top);
    }
    else if (w != "none")
    {
      throw InvalidInput(fmt::format("{}: unknown side '{}'", where, w));
    }
  }
  return sides;
}

}  // namespace

GeometrySpec parse_geometry(std::istream &in, const std::string &origin)
{
  GeometrySpec geo;
  bool saw_robin = false;
  bool saw_dirichlet = false;
  std::string line, key, value;
  int lineno = 0;
  while (std::getline(in, line))
  {
    lineno++;
    if (!text::split_key_value(line, key, value))
    {
      continue;
    }
    const std::string where = fmt::format("{}:{}", origin, lineno);
    if (key == "domain")
    {
      geo.domain = parse_rect(value, where);
    }
    else if (key == "pec")
    {
      geo.pec.push_back(parse_rect(value, where));
    }
    else if (key == "robin")
    {
      geo.robin_sides = parse_sides(value, where);
      saw_robin = true;
    }
    else if (key == "dirichlet")
    {
      geo.dirichlet_sides = parse_sides(value, where);
      saw_dirichlet = true;
    }
    else
    {
      throw InvalidInput(fmt::format("{}: unknown geometry key '{}'", where, key));
    }
  }
  // A single list determines the other.
  if (saw_robin && !saw_dirichlet)
  {
    geo.dirichlet_sides = geo.robin_sides.complement();
  }
  else if (saw_dirichlet && !saw_robin)
  {
    geo.robin_sides = geo.dirichlet_sides.complement();
  }
  geo.validate();
  return geo;
}

GeometrySpec read_geometry(const std::filesystem::path &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw InvalidInput(fmt::format("cannot open geometry file '{}'", path.string()));
  }
  return parse_geometry(in, path.string());
}

void write_geometry(std::ostream &out, const GeometrySpec &geo)
{
  auto sides = [](SideSet s)
  {
    std::string out;
    for (Side side : {Side::left, Side::right, Side::bottom, Side::top})
    {
      if (s.contains(side))
      {
        out += (out.empty() ? "" : " ") + to_string(side);
      }
    }
    return out.empty() ? std::string("none") : out;
  };
  out << fmt::format("domain = {:.17g} {:.17g} {:.17g} {:.17g}\n", geo.domain.x0, geo.domain.y0,
                     geo.domain.x1, geo.domain.y1);
  out << "robin = " << sides(geo.robin_sides) << "\n";
  out << "dirichlet = " << sides(geo.dirichlet_sides) << "\n";
  for (const auto &r : geo.pec)
  {
    out << fmt::format("pec = {:.17g} {:.17g} {:.17g} {:.17g}\n", r.x0, r.y0, r.x1, r.y1);
  }
}

void write_mesh_stats_csv(std::ostream &out, const StructuredMesh &mesh, const ActiveDofs &dofs,
                          const SubdomainGrid &grid)
{
  int interface_edges = 0;
  for (int e = 0; e < mesh.num_edges(); e++)
  {
    if (dofs.active(e) && grid.edge_owner[e].is_interface())
    {
      interface_edges++;
    }
  }
  out << "# arbilomod-csv v1 mesh-stats\n";
  out << "name,value\n";
  out << "nx," << mesh.nx << "\n";
  out << "ny," << mesh.ny << "\n";
  out << "vertices," << mesh.vertices.size() << "\n";
  out << "triangles," << mesh.triangles.size() << "\n";
  out << "edges," << mesh.edges.size() << "\n";
  out << "active_dofs," << dofs.size() << "\n";
  out << "disabled_pec," << dofs.count(DisableReason::pec) << "\n";
  out << "disabled_dirichlet," << dofs.count(DisableReason::dirichlet) << "\n";
  out << "subdomains," << grid.num_subdomains() << "\n";
  out << "interfaces," << grid.interfaces.size() << "\n";
  out << "active_interface_dofs," << interface_edges << "\n";
}

}  // namespace arbilomod
