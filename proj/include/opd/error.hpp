#ifndef OPD_ERROR_HPP
#define OPD_ERROR_HPP

#include <sstream>
#include <stdexcept>
#include <string>

namespace opd {

/* Library-level error; everything thrown by opd derives from this. */
class error : public std::runtime_error {
  public:
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

namespace detail {
template <typename... Ts>
std::string concat(const Ts&... parts)
{
    std::ostringstream os;
    (os << ... << parts);
    return os.str();
}
}  // namespace detail

template <typename... Ts>
[[noreturn]] void fail(const Ts&... parts)
{
    throw error(detail::concat(parts...));
}

template <typename... Ts>
void require(bool cond, const Ts&... parts)
{
    if (!cond)
        fail(parts...);
}

}  // namespace opd

#endif
