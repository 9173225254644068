#include "mazing/maze.hpp"

#include <deque>
#include <fstream>
#include <sstream>

namespace mazing::world {

std::vector<Cell> MazeMap::open_cells() const {
    std::vector<Cell> out;
    for (int cy = 0; cy < height; ++cy)
        for (int cx = 0; cx < width; ++cx)
            if (!blocked(cx, cy)) out.push_back({cx, cy});
    return out;
}

std::string MazeMap::serialize() const {
    std::string out;
    for (int cy = 0; cy < height; ++cy) {
        for (int cx = 0; cx < width; ++cx) {
            Cell c{cx, cy};
            if (c == player_spawn)
                out += 'P';
            else if (c == agent_spawn)
                out += 'A';
            else
                out += blocked(cx, cy) ? '#' : '.';
        }
        out += '\n';
    }
    return out;
}

static bool cells_connected(const MazeMap& m, const Cell& a, const Cell& b) {
    if (m.blocked(a) || m.blocked(b)) return false;
    std::vector<uint8_t> seen(static_cast<size_t>(m.width) * m.height, 0);
    std::deque<Cell> q{a};
    seen[static_cast<size_t>(m.cell_index(a))] = 1;
    while (!q.empty()) {
        Cell c = q.front();
        q.pop_front();
        if (c == b) return true;
        const int dx[] = {1, -1, 0, 0}, dy[] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
            Cell n{c.cx + dx[k], c.cy + dy[k]};
            if (!m.blocked(n) && !seen[static_cast<size_t>(m.cell_index(n))]) {
                seen[static_cast<size_t>(m.cell_index(n))] = 1;
                q.push_back(n);
            }
        }
    }
    return false;
}

MazeMap parse_maze(const std::string& text) {
    std::vector<std::string> rows;
    std::string line;
    std::istringstream in(text);
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) rows.push_back(line);
    }
    if (rows.size() < 3) throw DataError("maze: fewer than 3 rows");

    MazeMap m;
    m.height = static_cast<int>(rows.size());
    m.width = static_cast<int>(rows[0].size());
    if (m.width < 3) throw DataError("maze: fewer than 3 columns");
    m.blocked_.assign(static_cast<size_t>(m.width) * m.height, 0);

    int players = 0, agents = 0;
    for (int cy = 0; cy < m.height; ++cy) {
        if (static_cast<int>(rows[cy].size()) != m.width)
            throw DataError("maze: ragged row " + std::to_string(cy + 1));
        for (int cx = 0; cx < m.width; ++cx) {
            char ch = rows[cy][cx];
            switch (ch) {
                case '#':
                    m.blocked_[static_cast<size_t>(cy) * m.width + cx] = 1;
                    break;
                case '.':
                    break;
                case 'P':
                    m.player_spawn = {cx, cy};
                    ++players;
                    break;
                case 'A':
                    m.agent_spawn = {cx, cy};
                    ++agents;
                    break;
                default:
                    throw DataError(std::string("maze: bad character '") + ch + "' at row " +
                                    std::to_string(cy + 1));
            }
        }
    }
    if (players != 1) throw DataError("maze: expected exactly one 'P' spawn");
    if (agents != 1) throw DataError("maze: expected exactly one 'A' spawn");

    for (int cx = 0; cx < m.width; ++cx)
        if (!m.blocked(cx, 0) || !m.blocked(cx, m.height - 1))
            throw DataError("maze: border not fully walled");
    for (int cy = 0; cy < m.height; ++cy)
        if (!m.blocked(0, cy) || !m.blocked(m.width - 1, cy))
            throw DataError("maze: border not fully walled");

    if (!cells_connected(m, m.player_spawn, m.agent_spawn))
        throw DataError("maze: spawns not mutually reachable");
    return m;
}

MazeMap load_maze(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("maze: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_maze(ss.str());
}

const std::string& default_map_text() {
    static const std::string text =
        "################\n"
        "#P.....#.......#\n"
        "#.###..#..###..#\n"
        "#.#....#..#....#\n"
        "#.#.####..#.##.#\n"
        "#.#.......#..#.#\n"
        "#...##.#####.#.#\n"
        "#.#..#.....#.#.#\n"
        "#.#..#.###.#.#.#\n"
        "#.#..#.#...#.#.#\n"
        "#.#..###.###.#.#\n"
        "#.#......#...#.#\n"
        "#.####.###.###.#\n"
        "#.#....#....#A.#\n"
        "#......#..#....#\n"
        "################\n";
    return text;
}

Vec2 slide_move(const MazeMap& map, Vec2 pos, const Vec2& delta, double margin) {
    const double nx = pos.x + delta.x;
    if (delta.x != 0) {
        const Vec2 probe{nx + (delta.x > 0 ? margin : -margin), pos.y};
        if (!map.blocked(cell_of(probe))) pos.x = nx;
    }
    const double ny = pos.y + delta.y;
    if (delta.y != 0) {
        const Vec2 probe{pos.x, ny + (delta.y > 0 ? margin : -margin)};
        if (!map.blocked(cell_of(probe))) pos.y = ny;
    }
    return pos;
}

}  // namespace mazing::world
