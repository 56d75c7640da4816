// SPDX-License-Identifier: Apache-2.0
#include "hvl/scene.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hvl::scene {

namespace {

struct Line {
    std::vector<std::string> words;
    int number = 0;
};

[[noreturn]] void fail(const std::string& path, int line, const std::string& msg) {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": " + msg);
}

std::vector<Line> readLines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<Line> out;
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
        ++number;
        size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.resize(hash);
        std::istringstream ss(raw);
        Line l;
        l.number = number;
        std::string w;
        while (ss >> w) l.words.push_back(w);
        if (!l.words.empty()) out.push_back(std::move(l));
    }
    return out;
}

double parseReal(const std::string& path, const Line& l, size_t idx) {
    if (idx >= l.words.size()) fail(path, l.number, "missing value for '" + l.words[0] + "'");
    try {
        size_t pos = 0;
        double v = std::stod(l.words[idx], &pos);
        if (pos != l.words[idx].size()) throw std::exception();
        return v;
    } catch (...) {
        fail(path, l.number, "expected a number, got '" + l.words[idx] + "'");
    }
}

int parseInt(const std::string& path, const Line& l, size_t idx) {
    double v = parseReal(path, l, idx);
    if (v != std::floor(v)) fail(path, l.number, "expected an integer, got '" + l.words[idx] + "'");
    return static_cast<int>(v);
}

Vec3 parseVec(const std::string& path, const Line& l) {
    return Vec3(parseReal(path, l, 1), parseReal(path, l, 2), parseReal(path, l, 3));
}

std::string dirOf(const std::string& path) {
    size_t slash = path.find_last_of('/');
    return slash == std::string::npos ? std::string() : path.substr(0, slash + 1);
}

struct ObjData {
    std::vector<Vec3> positions;
    std::vector<Vec3> normals;
};

int parseObjIndex(const std::string& path, const Line& l, const std::string& field, size_t count) {
    long v = 0;
    try {
        v = std::stol(field);
    } catch (...) {
        fail(path, l.number, "bad face index '" + field + "'");
    }
    if (v < 1 || static_cast<size_t>(v) > count)
        fail(path, l.number, "face index " + field + " out of range (have " +
                                 std::to_string(count) + ")");
    return static_cast<int>(v - 1);
}

void loadObj(const std::string& path, int material, std::vector<Triangle>& out) {
    ObjData d;
    for (const Line& l : readLines(path)) {
        const std::string& rec = l.words[0];
        if (rec == "v") {
            d.positions.push_back(parseVec(path, l));
        } else if (rec == "vn") {
            d.normals.push_back(parseVec(path, l));
        } else if (rec == "f") {
            if (l.words.size() != 4)
                fail(path, l.number, "face with " + std::to_string(l.words.size() - 1) +
                                         " vertices; only triangles are supported");
            std::array<Vec3, 3> p, n;
            bool haveNormals = true;
            for (int k = 0; k < 3; ++k) {
                const std::string& spec = l.words[static_cast<size_t>(k) + 1];
                size_t s1 = spec.find('/');
                std::string vIdx = spec.substr(0, s1);
                p[static_cast<size_t>(k)] =
                    d.positions[static_cast<size_t>(parseObjIndex(path, l, vIdx, d.positions.size()))];
                std::string nIdx;
                if (s1 != std::string::npos) {
                    size_t s2 = spec.find('/', s1 + 1);
                    if (s2 != std::string::npos) nIdx = spec.substr(s2 + 1);
                }
                if (nIdx.empty())
                    haveNormals = false;
                else
                    n[static_cast<size_t>(k)] =
                        d.normals[static_cast<size_t>(parseObjIndex(path, l, nIdx, d.normals.size()))];
            }
            Vec3 geo = cross(p[1] - p[0], p[2] - p[0]);
            if (length(geo) < 1e-14) fail(path, l.number, "degenerate triangle");
            if (!haveNormals) n[0] = n[1] = n[2] = normalize(geo);
            Triangle t;
            t.p0 = p[0];
            t.p1 = p[1];
            t.p2 = p[2];
            t.n0 = normalize(n[0]);
            t.n1 = normalize(n[1]);
            t.n2 = normalize(n[2]);
            t.material = material;
            out.push_back(t);
        }
        // Other record types (o, g, s, usemtl, vt, ...) are ignored.
    }
}

struct MeshDecl {
    std::string obj;
    int material = -1;
    int line = 0;
};

bool triHit(const Triangle& tr, const Ray& r, double& t, double& u, double& v) {
    Vec3 e1 = tr.p1 - tr.p0;
    Vec3 e2 = tr.p2 - tr.p0;
    Vec3 pv = cross(r.dir, e2);
    double det = dot(e1, pv);
    if (std::abs(det) < 1e-14) return false;
    double inv = 1.0 / det;
    Vec3 tv = r.origin - tr.p0;
    u = dot(tv, pv) * inv;
    if (u < 0.0 || u > 1.0) return false;
    Vec3 qv = cross(tv, e1);
    v = dot(r.dir, qv) * inv;
    if (v < 0.0 || u + v > 1.0) return false;
    t = dot(e2, qv) * inv;
    return t > r.tMin && t < r.tMax;
}

Hit makeHit(const Scene& s, const Ray& r, int tri, double t, double u, double v) {
    const Triangle& tr = s.triangles[static_cast<size_t>(tri)];
    Hit h;
    h.t = t;
    h.point = r.origin + r.dir * t;
    h.normal = normalize(tr.n0 * (1.0 - u - v) + tr.n1 * u + tr.n2 * v);
    h.material = tr.material;
    h.triangle = tri;
    return h;
}

void bounds(const Scene& s, const std::vector<int>& order, int start, int end, Vec3& lo, Vec3& hi) {
    lo = Vec3(kInf, kInf, kInf);
    hi = Vec3(-kInf, -kInf, -kInf);
    for (int i = start; i < end; ++i) {
        const Triangle& t = s.triangles[static_cast<size_t>(order[static_cast<size_t>(i)])];
        for (const Vec3* p : {&t.p0, &t.p1, &t.p2}) {
            lo.x = std::min(lo.x, p->x);
            lo.y = std::min(lo.y, p->y);
            lo.z = std::min(lo.z, p->z);
            hi.x = std::max(hi.x, p->x);
            hi.y = std::max(hi.y, p->y);
            hi.z = std::max(hi.z, p->z);
        }
    }
}

int buildNode(Scene& s, int start, int end) {
    constexpr int kLeafSize = 4;
    int idx = static_cast<int>(s.nodes.size());
    s.nodes.emplace_back();
    Vec3 lo, hi;
    bounds(s, s.order, start, end, lo, hi);
    s.nodes[static_cast<size_t>(idx)].bmin = lo;
    s.nodes[static_cast<size_t>(idx)].bmax = hi;

    int count = end - start;
    auto centroid = [&](int tri) {
        const Triangle& t = s.triangles[static_cast<size_t>(tri)];
        return (t.p0 + t.p1 + t.p2) / 3.0;
    };
    bool splittable = false;
    if (count > kLeafSize) {
        Vec3 clo(kInf, kInf, kInf), chi(-kInf, -kInf, -kInf);
        for (int i = start; i < end; ++i) {
            Vec3 c = centroid(s.order[static_cast<size_t>(i)]);
            clo.x = std::min(clo.x, c.x);
            clo.y = std::min(clo.y, c.y);
            clo.z = std::min(clo.z, c.z);
            chi.x = std::max(chi.x, c.x);
            chi.y = std::max(chi.y, c.y);
            chi.z = std::max(chi.z, c.z);
        }
        Vec3 ext = chi - clo;
        int axis = ext.x >= ext.y ? (ext.x >= ext.z ? 0 : 2) : (ext.y >= ext.z ? 1 : 2);
        double extent = axis == 0 ? ext.x : (axis == 1 ? ext.y : ext.z);
        if (extent > 1e-12) {
            int mid = start + count / 2;
            std::nth_element(s.order.begin() + start, s.order.begin() + mid, s.order.begin() + end,
                             [&](int a, int b) {
                                 Vec3 ca = centroid(a), cb = centroid(b);
                                 double va = axis == 0 ? ca.x : (axis == 1 ? ca.y : ca.z);
                                 double vb = axis == 0 ? cb.x : (axis == 1 ? cb.y : cb.z);
                                 return va < vb;
                             });
            int left = buildNode(s, start, mid);
            int right = buildNode(s, mid, end);
            s.nodes[static_cast<size_t>(idx)].left = left;
            s.nodes[static_cast<size_t>(idx)].right = right;
            s.nodes[static_cast<size_t>(idx)].count = 0;
            splittable = true;
        }
    }
    if (!splittable) {
        s.nodes[static_cast<size_t>(idx)].left = start;
        s.nodes[static_cast<size_t>(idx)].right = -1;
        s.nodes[static_cast<size_t>(idx)].count = count;
    }
    return idx;
}

bool slabHit(const BvhNode& n, const Vec3& o, const Vec3& invDir, double tMax) {
    double t0 = (n.bmin.x - o.x) * invDir.x, t1 = (n.bmax.x - o.x) * invDir.x;
    if (invDir.x < 0.0) std::swap(t0, t1);
    double t2 = (n.bmin.y - o.y) * invDir.y, t3 = (n.bmax.y - o.y) * invDir.y;
    if (invDir.y < 0.0) std::swap(t2, t3);
    double t4 = (n.bmin.z - o.z) * invDir.z, t5 = (n.bmax.z - o.z) * invDir.z;
    if (invDir.z < 0.0) std::swap(t4, t5);
    double enter = std::max(std::max(t0, t2), t4);
    double exit = std::min(std::min(t1, t3), t5);
    return enter <= exit && exit >= 0.0 && enter <= tMax;
}

}  // namespace

void finalizeScene(Scene& s) {
    s.nodes.clear();
    s.order.resize(s.triangles.size());
    for (size_t i = 0; i < s.order.size(); ++i) s.order[i] = static_cast<int>(i);
    if (!s.triangles.empty()) {
        buildNode(s, 0, static_cast<int>(s.triangles.size()));
        Vec3 lo = s.nodes[0].bmin, hi = s.nodes[0].bmax;
        s.diagonal = length(hi - lo);
    } else {
        s.diagonal = 0.0;
    }
}

Scene loadScene(const std::string& path) {
    Scene s;
    std::vector<MeshDecl> meshes;
    bool haveCamera = false;

    std::vector<Line> lines = readLines(path);
    size_t i = 0;
    auto inSection = [&](const char* name) {
        const Line& head = lines[i];
        if (head.words.size() != 2 || head.words[1] != "{")
            fail(path, head.number, std::string("expected '") + name + " {'");
        ++i;
    };
    while (i < lines.size()) {
        const std::string& section = lines[i].words[0];
        int sectionLine = lines[i].number;
        if (section == "material") {
            inSection("material");
            brdf::BrdfModel m;
            bool kindSeen = false;
            for (; i < lines.size() && lines[i].words[0] != "}"; ++i) {
                const Line& l = lines[i];
                const std::string& k = l.words[0];
                if (k == "kind") {
                    if (l.words.size() < 2) fail(path, l.number, "missing material kind");
                    if (l.words[1] == "lambertian")
                        m.kind = brdf::Kind::Lambertian;
                    else if (l.words[1] == "ggx")
                        m.kind = brdf::Kind::Ggx;
                    else
                        fail(path, l.number, "unknown material kind '" + l.words[1] + "'");
                    kindSeen = true;
                } else if (k == "albedo")
                    m.albedo = parseVec(path, l);
                else if (k == "roughness")
                    m.roughness = parseReal(path, l, 1);
                else if (k == "eta")
                    m.eta = parseReal(path, l, 1);
                else
                    fail(path, l.number, "unknown material key '" + k + "'");
            }
            if (i == lines.size()) fail(path, sectionLine, "unterminated material section");
            if (!kindSeen) fail(path, sectionLine, "material without kind");
            s.materials.push_back(m);
            ++i;
        } else if (section == "mesh") {
            inSection("mesh");
            MeshDecl d;
            d.line = sectionLine;
            for (; i < lines.size() && lines[i].words[0] != "}"; ++i) {
                const Line& l = lines[i];
                if (l.words[0] == "obj") {
                    if (l.words.size() < 2) fail(path, l.number, "missing obj path");
                    d.obj = l.words[1];
                } else if (l.words[0] == "material")
                    d.material = parseInt(path, l, 1);
                else
                    fail(path, l.number, "unknown mesh key '" + l.words[0] + "'");
            }
            if (i == lines.size()) fail(path, sectionLine, "unterminated mesh section");
            if (d.obj.empty()) fail(path, sectionLine, "mesh without obj path");
            meshes.push_back(d);
            ++i;
        } else if (section == "light") {
            inSection("light");
            SpotLight l0;
            for (; i < lines.size() && lines[i].words[0] != "}"; ++i) {
                const Line& l = lines[i];
                const std::string& k = l.words[0];
                if (k == "position")
                    l0.position = parseVec(path, l);
                else if (k == "direction")
                    l0.direction = parseVec(path, l);
                else if (k == "half_angle_deg")
                    l0.halfAngle = parseReal(path, l, 1) * kPi / 180.0;
                else if (k == "power")
                    l0.power = parseVec(path, l);
                else if (k == "rsm_resolution")
                    l0.rsmResolution = parseInt(path, l, 1);
                else
                    fail(path, l.number, "unknown light key '" + k + "'");
            }
            if (i == lines.size()) fail(path, sectionLine, "unterminated light section");
            if (length(l0.direction) < 1e-12) fail(path, sectionLine, "light direction is zero");
            l0.direction = normalize(l0.direction);
            s.lights.push_back(l0);
            ++i;
        } else if (section == "camera") {
            inSection("camera");
            for (; i < lines.size() && lines[i].words[0] != "}"; ++i) {
                const Line& l = lines[i];
                const std::string& k = l.words[0];
                if (k == "position")
                    s.camera.position = parseVec(path, l);
                else if (k == "look_at")
                    s.camera.lookAt = parseVec(path, l);
                else if (k == "up")
                    s.camera.up = parseVec(path, l);
                else if (k == "vfov_deg")
                    s.camera.vfovDeg = parseReal(path, l, 1);
                else if (k == "width")
                    s.camera.width = parseInt(path, l, 1);
                else if (k == "height")
                    s.camera.height = parseInt(path, l, 1);
                else
                    fail(path, l.number, "unknown camera key '" + k + "'");
            }
            if (i == lines.size()) fail(path, sectionLine, "unterminated camera section");
            haveCamera = true;
            ++i;
        } else {
            fail(path, sectionLine, "unknown section '" + section + "'");
        }
    }

    std::string base = dirOf(path);
    for (size_t mi = 0; mi < meshes.size(); ++mi) {
        const MeshDecl& d = meshes[mi];
        if (d.material < 0 || static_cast<size_t>(d.material) >= s.materials.size())
            fail(path, d.line,
                 "mesh " + std::to_string(mi) + " (" + d.obj + "): material index " +
                     std::to_string(d.material) + " out of range (" +
                     std::to_string(s.materials.size()) + " materials)");
        s.meshStart.push_back(static_cast<int>(s.triangles.size()));
        loadObj(base + d.obj, d.material, s.triangles);
    }

    if (s.lights.empty()) throw std::runtime_error(path + ": scene has no lights");
    for (const SpotLight& l : s.lights)
        if (!(l.halfAngle > 0.0 && l.halfAngle <= kHalfPi + 1e-12))
            throw std::runtime_error(path + ": light half angle out of (0, 90] degrees");
    for (const SpotLight& l : s.lights)
        if (l.rsmResolution < 1) throw std::runtime_error(path + ": rsm_resolution must be >= 1");
    if (!haveCamera) throw std::runtime_error(path + ": scene has no camera");
    if (s.camera.width < 1 || s.camera.height < 1)
        throw std::runtime_error(path + ": camera resolution must be at least 1x1");

    finalizeScene(s);
    return s;
}

std::optional<Hit> intersectBrute(const Scene& s, const Ray& ray) {
    double bestT = kInf, bu = 0, bv = 0;
    int bestTri = -1;
    for (size_t i = 0; i < s.triangles.size(); ++i) {
        double t, u, v;
        if (triHit(s.triangles[i], ray, t, u, v)) {
            if (t < bestT || (t == bestT && static_cast<int>(i) < bestTri)) {
                bestT = t;
                bestTri = static_cast<int>(i);
                bu = u;
                bv = v;
            }
        }
    }
    if (bestTri < 0) return std::nullopt;
    return makeHit(s, ray, bestTri, bestT, bu, bv);
}

std::optional<Hit> intersect(const Scene& s, const Ray& ray) {
    if (s.nodes.empty()) return std::nullopt;
    Vec3 invDir(1.0 / ray.dir.x, 1.0 / ray.dir.y, 1.0 / ray.dir.z);
    int stack[64];
    int sp = 0;
    stack[sp++] = 0;
    double bestT = kInf, bu = 0, bv = 0;
    int bestTri = -1;
    double tCut = ray.tMax;
    while (sp > 0) {
        const BvhNode& n = s.nodes[static_cast<size_t>(stack[--sp])];
        if (!slabHit(n, ray.origin, invDir, std::min(tCut, bestT))) continue;
        if (n.count > 0) {
            for (int k = 0; k < n.count; ++k) {
                int tri = s.order[static_cast<size_t>(n.left + k)];
                double t, u, v;
                if (triHit(s.triangles[static_cast<size_t>(tri)], ray, t, u, v)) {
                    if (t < bestT || (t == bestT && tri < bestTri)) {
                        bestT = t;
                        bestTri = tri;
                        bu = u;
                        bv = v;
                    }
                }
            }
        } else {
            stack[sp++] = n.left;
            stack[sp++] = n.right;
        }
    }
    if (bestTri < 0) return std::nullopt;
    return makeHit(s, ray, bestTri, bestT, bu, bv);
}

bool occluded(const Scene& s, const Vec3& a, const Vec3& b) {
    if (s.nodes.empty()) return false;
    Vec3 d = b - a;
    double dist = length(d);
    double eps = 1e-4 * s.diagonal;
    if (dist <= 2.0 * eps) return false;
    Ray ray{a, d / dist, eps, dist - eps};
    Vec3 invDir(1.0 / ray.dir.x, 1.0 / ray.dir.y, 1.0 / ray.dir.z);
    int stack[64];
    int sp = 0;
    stack[sp++] = 0;
    while (sp > 0) {
        const BvhNode& n = s.nodes[static_cast<size_t>(stack[--sp])];
        if (!slabHit(n, ray.origin, invDir, ray.tMax)) continue;
        if (n.count > 0) {
            for (int k = 0; k < n.count; ++k) {
                int tri = s.order[static_cast<size_t>(n.left + k)];
                double t, u, v;
                if (triHit(s.triangles[static_cast<size_t>(tri)], ray, t, u, v)) return true;
            }
        } else {
            stack[sp++] = n.left;
            stack[sp++] = n.right;
        }
    }
    return false;
}

Ray cameraRay(const Camera& c, double px, double py) {
    Vec3 fwd = normalize(c.lookAt - c.position);
    Vec3 right = normalize(cross(fwd, c.up));
    Vec3 upv = cross(right, fwd);
    double tanHalf = std::tan(c.vfovDeg * kPi / 360.0);
    double aspect = static_cast<double>(c.width) / c.height;
    double sx = (2.0 * px / c.width - 1.0) * tanHalf * aspect;
    double sy = (1.0 - 2.0 * py / c.height) * tanHalf;
    Ray r;
    r.origin = c.position;
    r.dir = normalize(fwd + right * sx + upv * sy);
    r.tMin = 1e-9;
    r.tMax = kInf;
    return r;
}

}  // namespace hvl::scene
