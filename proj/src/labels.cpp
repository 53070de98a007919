#include "dockslim/source_model.hpp"

namespace dockslim {

// The controlled annotation vocabulary. Command schemas and rule patterns may
// only reference names listed here; anything else is a ConfigError.
const std::vector<std::string_view>& label_vocabulary() {
    static const std::vector<std::string_view> vocabulary = {
        // generic
        "SC-REDIRECT-TARGET",

        // wrappers
        "SC-SUDO", "SC-ENV", "SC-COMMAND", "SC-NICE", "SC-TIME", "SC-NOHUP", "SC-EXEC",
        "SC-PYTHON",

        // apt-get
        "SC-APT-GET", "SC-APT-GET-INSTALL", "SC-APT-GET-UPDATE", "SC-APT-GET-UPGRADE",
        "SC-APT-GET-DIST-UPGRADE", "SC-APT-GET-REMOVE", "SC-APT-GET-PURGE",
        "SC-APT-GET-AUTOREMOVE", "SC-APT-GET-CLEAN", "SC-APT-GET-PACKAGE", "SC-APT-GET-F-YES",
        "SC-APT-GET-F-QUIET", "SC-APT-GET-F-NO-INSTALL-RECOMMENDS",
        "SC-APT-GET-F-NO-INSTALL-SUGGESTS", "SC-APT-GET-F-OPTION", "SC-APT-GET-F-TARGET-RELEASE",
        "SC-APT-GET-F-FIX-BROKEN", "SC-APT-GET-F-FIX-MISSING", "SC-APT-GET-F-REINSTALL",
        "SC-APT-GET-F-ALLOW-UNAUTHENTICATED", "SC-APT-GET-F-ALLOW-DOWNGRADES",

        // apt
        "SC-APT", "SC-APT-INSTALL", "SC-APT-UPDATE", "SC-APT-UPGRADE", "SC-APT-REMOVE",
        "SC-APT-PACKAGE", "SC-APT-F-YES", "SC-APT-F-QUIET", "SC-APT-F-NO-INSTALL-RECOMMENDS",

        // apk
        "SC-APK", "SC-APK-ADD", "SC-APK-DEL", "SC-APK-UPDATE", "SC-APK-UPGRADE", "SC-APK-PACKAGE",
        "SC-APK-F-NO-CACHE", "SC-APK-F-UPDATE", "SC-APK-F-VIRTUAL", "SC-APK-F-REPOSITORY",
        "SC-APK-F-ALLOW-UNTRUSTED", "SC-APK-F-QUIET", "SC-APK-F-NO-PROGRESS",

        // pip
        "SC-PIP", "SC-PIP-INSTALL", "SC-PIP-UNINSTALL", "SC-PIP-DOWNLOAD", "SC-PIP-WHEEL",
        "SC-PIP-PACKAGE", "SC-PIP-F-NO-CACHE-DIR", "SC-PIP-F-REQUIREMENT", "SC-PIP-F-UPGRADE",
        "SC-PIP-F-USER", "SC-PIP-F-EDITABLE", "SC-PIP-F-INDEX-URL", "SC-PIP-F-EXTRA-INDEX-URL",
        "SC-PIP-F-CONSTRAINT", "SC-PIP-F-QUIET", "SC-PIP-F-NO-DEPS", "SC-PIP-F-TARGET",
        "SC-PIP-F-CACHE-DIR", "SC-PIP-F-BREAK-SYSTEM-PACKAGES", "SC-PIP-F-FIND-LINKS",
        "SC-PIP-F-PRE", "SC-PIP-F-FORCE-REINSTALL", "SC-PIP-F-IGNORE-INSTALLED",
        "SC-PIP-F-TRUSTED-HOST", "SC-PIP-F-PREFIX",

        // npm / npx
        "SC-NPM", "SC-NPM-INSTALL", "SC-NPM-CI", "SC-NPM-CACHE-CLEAN", "SC-NPM-RUN",
        "SC-NPM-UPDATE", "SC-NPM-PACKAGE", "SC-NPM-F-FORCE", "SC-NPM-F-GLOBAL",
        "SC-NPM-F-PRODUCTION", "SC-NPM-F-SAVE", "SC-NPM-F-SAVE-DEV", "SC-NPM-F-SILENT",
        "SC-NPM-F-UNSAFE-PERM", "SC-NPM-F-LOGLEVEL", "SC-NPM-F-REGISTRY", "SC-NPM-F-PREFIX",
        "SC-NPM-F-OMIT", "SC-NPM-F-LEGACY-PEER-DEPS", "SC-NPM-F-QUIET", "SC-NPX",

        // yarn
        "SC-YARN", "SC-YARN-INSTALL", "SC-YARN-ADD", "SC-YARN-CACHE-CLEAN", "SC-YARN-RUN",
        "SC-YARN-PACKAGE", "SC-YARN-F-FROZEN-LOCKFILE", "SC-YARN-F-PRODUCTION",
        "SC-YARN-F-PURE-LOCKFILE", "SC-YARN-F-NETWORK-TIMEOUT", "SC-YARN-F-IGNORE-ENGINES",
        "SC-YARN-F-NON-INTERACTIVE", "SC-YARN-F-SILENT", "SC-YARN-F-CWD", "SC-YARN-F-IMMUTABLE",
        "SC-YARN-F-PREFER-OFFLINE", "SC-YARN-F-IGNORE-SCRIPTS",

        // gem
        "SC-GEM", "SC-GEM-INSTALL", "SC-GEM-UPDATE", "SC-GEM-UNINSTALL", "SC-GEM-PACKAGE",
        "SC-GEM-F-SYSTEM", "SC-GEM-F-NO-DOCUMENT", "SC-GEM-F-NO-RDOC", "SC-GEM-F-NO-RI",
        "SC-GEM-F-VERSION", "SC-GEM-F-USER-INSTALL", "SC-GEM-F-INSTALL-DIR", "SC-GEM-F-BINDIR",
        "SC-GEM-F-SOURCE", "SC-GEM-F-QUIET",

        // yum / dnf
        "SC-YUM", "SC-YUM-INSTALL", "SC-YUM-UPDATE", "SC-YUM-REMOVE", "SC-YUM-CLEAN",
        "SC-YUM-GROUPINSTALL", "SC-YUM-PACKAGE", "SC-YUM-F-ASSUMEYES", "SC-YUM-F-QUIET",
        "SC-YUM-F-SETOPT", "SC-YUM-F-ENABLEREPO", "SC-YUM-F-DISABLEREPO", "SC-YUM-F-NOGPGCHECK",
        "SC-YUM-F-SKIP-BROKEN", "SC-YUM-F-NODOCS", "SC-YUM-F-INSTALLROOT", "SC-YUM-F-RELEASEVER",
        "SC-YUM-F-ALLOWERASING", "SC-YUM-F-EXCLUDE",

        // tar
        "SC-TAR", "SC-TAR-EXTRACT", "SC-TAR-F-CREATE", "SC-TAR-F-LIST", "SC-TAR-F-FILE",
        "SC-TAR-ARCHIVE", "SC-TAR-F-GZIP", "SC-TAR-F-BZIP2", "SC-TAR-F-XZ", "SC-TAR-F-ZSTD",
        "SC-TAR-F-VERBOSE", "SC-TAR-F-DIRECTORY", "SC-TAR-F-STRIP-COMPONENTS",
        "SC-TAR-F-NO-SAME-OWNER", "SC-TAR-F-EXCLUDE", "SC-TAR-F-PRESERVE-PERMISSIONS",
        "SC-TAR-F-TO-STDOUT", "SC-TAR-MEMBER",

        // mkdir / rm / mktemp
        "SC-MKDIR", "SC-MKDIR-F-PARENTS", "SC-MKDIR-F-MODE", "SC-MKDIR-F-VERBOSE", "SC-MKDIR-PATH",
        "SC-RM", "SC-RM-F-RECURSIVE", "SC-RM-F-FORCE", "SC-RM-F-VERBOSE", "SC-RM-F-DIR",
        "SC-RM-PATH", "SC-MKTEMP", "SC-MKTEMP-D", "SC-MKTEMP-F-DRY-RUN", "SC-MKTEMP-F-QUIET",
        "SC-MKTEMP-F-TMPDIR", "SC-MKTEMP-F-SUFFIX", "SC-MKTEMP-TEMPLATE",

        // gpg
        "SC-GPG", "SC-GPG-F-VERIFY", "SC-GPG-F-BATCH", "SC-GPG-F-KEYSERVER", "SC-GPG-F-RECV-KEYS",
        "SC-GPG-F-IMPORT", "SC-GPG-F-DEARMOR", "SC-GPG-F-OUTPUT", "SC-GPG-F-HOMEDIR",
        "SC-GPG-F-NO-TTY", "SC-GPG-F-QUIET", "SC-GPG-F-YES", "SC-GPG-F-FINGERPRINT",
        "SC-GPG-F-EXPORT", "SC-GPG-F-KEYSERVER-OPTIONS", "SC-GPG-ARG",

        // wget / curl
        "SC-WGET", "SC-WGET-F-OUTPUT-DOCUMENT", "SC-WGET-OUTPUT", "SC-WGET-F-QUIET",
        "SC-WGET-F-NO-VERBOSE", "SC-WGET-F-NO-CHECK-CERTIFICATE", "SC-WGET-F-DIRECTORY-PREFIX",
        "SC-WGET-F-PROGRESS", "SC-WGET-F-CONTINUE", "SC-WGET-F-HEADER", "SC-WGET-F-TRIES",
        "SC-WGET-F-TIMEOUT", "SC-WGET-URL", "SC-CURL", "SC-CURL-F-OUTPUT", "SC-CURL-OUTPUT",
        "SC-CURL-F-REMOTE-NAME", "SC-CURL-F-LOCATION", "SC-CURL-F-SILENT", "SC-CURL-F-SHOW-ERROR",
        "SC-CURL-F-FAIL", "SC-CURL-F-INSECURE", "SC-CURL-F-HEADER", "SC-CURL-F-REQUEST",
        "SC-CURL-F-DATA", "SC-CURL-F-RETRY", "SC-CURL-F-WRITE-OUT", "SC-CURL-F-USER",
        "SC-CURL-F-PROXY", "SC-CURL-F-CONNECT-TIMEOUT", "SC-CURL-F-MAX-TIME",
        "SC-CURL-F-COMPRESSED", "SC-CURL-F-CREATE-DIRS", "SC-CURL-F-PROTO",
        "SC-CURL-F-USER-AGENT", "SC-CURL-F-HEAD", "SC-CURL-F-VERBOSE", "SC-CURL-URL",

        // cd / echo / printf
        "SC-CD", "SC-CD-PATH", "SC-ECHO", "SC-ECHO-F-NO-NEWLINE", "SC-ECHO-F-ESCAPES",
        "SC-ECHO-ARG", "SC-PRINTF", "SC-PRINTF-ARG",
    };
    return vocabulary;
}

}  // namespace dockslim
