#include <algorithm>
#include <cctype>

#include "dockslim/enrichment.hpp"

namespace dockslim {

namespace {

std::optional<Label> opt(const char* name) {
    if (name == nullptr) {
        return std::nullopt;
    }
    return Label::of(name);
}

FlagSpec flag(std::initializer_list<const char*> spellings, const char* label) {
    return FlagSpec{{spellings.begin(), spellings.end()}, Label::of(label), false, std::nullopt};
}

FlagSpec valued(std::initializer_list<const char*> spellings, const char* label,
                const char* value_label = nullptr) {
    return FlagSpec{{spellings.begin(), spellings.end()}, Label::of(label), true, opt(value_label)};
}

SubcommandSpec sub(std::initializer_list<const char*> path, const char* label,
                   const char* positional = nullptr) {
    return SubcommandSpec{{path.begin(), path.end()}, Label::of(label), opt(positional)};
}

CommandSchema schema(std::initializer_list<const char*> names, const char* label) {
    CommandSchema s{{names.begin(), names.end()}, Label::of(label), {}, {}, {}, {}, false, false};
    return s;
}

std::vector<CommandSchema> build_schemas() {
    std::vector<CommandSchema> all;

    {
        auto s = schema({"apt-get"}, "SC-APT-GET");
        s.subcommands = {
            sub({"install"}, "SC-APT-GET-INSTALL", "SC-APT-GET-PACKAGE"),
            sub({"update"}, "SC-APT-GET-UPDATE"),
            sub({"upgrade"}, "SC-APT-GET-UPGRADE"),
            sub({"dist-upgrade"}, "SC-APT-GET-DIST-UPGRADE"),
            sub({"remove"}, "SC-APT-GET-REMOVE", "SC-APT-GET-PACKAGE"),
            sub({"purge"}, "SC-APT-GET-PURGE", "SC-APT-GET-PACKAGE"),
            sub({"autoremove"}, "SC-APT-GET-AUTOREMOVE"),
            sub({"clean"}, "SC-APT-GET-CLEAN"),
        };
        s.flags = {
            flag({"-y", "--yes", "--assume-yes"}, "SC-APT-GET-F-YES"),
            flag({"-q", "-qq", "--quiet"}, "SC-APT-GET-F-QUIET"),
            flag({"--no-install-recommends"}, "SC-APT-GET-F-NO-INSTALL-RECOMMENDS"),
            flag({"--no-install-suggests"}, "SC-APT-GET-F-NO-INSTALL-SUGGESTS"),
            valued({"-o", "--option"}, "SC-APT-GET-F-OPTION"),
            valued({"-t", "--target-release", "--default-release"}, "SC-APT-GET-F-TARGET-RELEASE"),
            flag({"-f", "--fix-broken"}, "SC-APT-GET-F-FIX-BROKEN"),
            flag({"-m", "--fix-missing", "--ignore-missing"}, "SC-APT-GET-F-FIX-MISSING"),
            flag({"--reinstall"}, "SC-APT-GET-F-REINSTALL"),
            flag({"--allow-unauthenticated"}, "SC-APT-GET-F-ALLOW-UNAUTHENTICATED"),
            flag({"--allow-downgrades"}, "SC-APT-GET-F-ALLOW-DOWNGRADES"),
        };
        all.push_back(std::move(s));
    }
    {
        auto s = schema({"apt"}, "SC-APT");
        s.subcommands = {
            sub({"install"}, "SC-APT-INSTALL", "SC-APT-PACKAGE"),
            sub({"update"}, "SC-APT-UPDATE"),
            sub({"upgrade"}, "SC-APT-UPGRADE"),
            sub({"remove"}, "SC-APT-REMOVE", "SC-APT-PACKAGE"),
        };
        s.flags = {
            flag({"-y", "--yes", "--assume-yes"}, "SC-APT-F-YES"),
            flag({"-q", "-qq", "--quiet"}, "SC-APT-F-QUIET"),
            flag({"--no-install-recommends"}, "SC-APT-F-NO-INSTALL-RECOMMENDS"),
        };
        all.push_back(std::move(s));
    }
    {
        auto s = schema({"apk"}, "SC-APK");
        s.subcommands = {
            sub({"add"}, "SC-APK-ADD", "SC-APK-PACKAGE"),
            sub({"del"}, "SC-APK-DEL", "SC-APK-PACKAGE"),
            sub({"update"}, "SC-APK-UPDATE"),
            sub({"upgrade"}, "SC-APK-UPGRADE"),
        };
        s.flags = {
            flag({"--no-cache"}, "SC-APK-F-NO-CACHE"),
            flag({"-U", "--update", "--update-cache"}, "SC-APK-F-UPDATE"),
            valued({"-t", "--virtual"}, "SC-APK-F-VIRTUAL"),
            valued({"-X", "--repository"}, "SC-APK-F-REPOSITORY"),
            flag({"--allow-untrusted"}, "SC-APK-F-ALLOW-UNTRUSTED"),
            flag({"-q", "--quiet"}, "SC-APK-F-QUIET"),
            flag({"--no-progress"}, "SC-APK-F-NO-PROGRESS"),
        };
        all.push_back(std::move(s));
    }
    {
        auto s = schema({"pip", "pip2", "pip3"}, "SC-PIP");
        s.subcommands = {
            sub({"install"}, "SC-PIP-INSTALL", "SC-PIP-PACKAGE"),
            sub({"uninstall"}, "SC-PIP-UNINSTALL", "SC-PIP-PACKAGE"),
            sub({"download"}, "SC-PIP-DOWNLOAD", "SC-PIP-PACKAGE"),
            sub({"wheel"}, "SC-PIP-WHEEL", "SC-PIP-PACKAGE"),
        };
        s.flags = {
            flag({"--no-cache-dir"}, "SC-PIP-F-NO-CACHE-DIR"),
            valued({"-r", "--requirement"}, "SC-PIP-F-REQUIREMENT"),
            flag({"-U", "--upgrade"}, "SC-PIP-F-UPGRADE"),
            flag({"--user"}, "SC-PIP-F-USER"),
            valued({"-e", "--editable"}, "SC-PIP-F-EDITABLE"),
            valued({"-i", "--index-url"}, "SC-PIP-F-INDEX-URL"),
            valued({"--extra-index-url"}, "SC-PIP-F-EXTRA-INDEX-URL"),
            valued({"-c", "--constraint"}, "SC-PIP-F-CONSTRAINT"),
            flag({"-q", "--quiet"}, "SC-PIP-F-QUIET"),
            flag({"--no-deps"}, "SC-PIP-F-NO-DEPS"),
            valued({"-t", "--target"}, "SC-PIP-F-TARGET"),
            valued({"--cache-dir"}, "SC-PIP-F-CACHE-DIR"),
            flag({"--break-system-packages"}, "SC-PIP-F-BREAK-SYSTEM-PACKAGES"),
            valued({"-f", "--find-links"}, "SC-PIP-F-FIND-LINKS"),
            flag({"--pre"}, "SC-PIP-F-PRE"),
            flag({"--force-reinstall"}, "SC-PIP-F-FORCE-REINSTALL"),
            flag({"-I", "--ignore-installed"}, "SC-PIP-F-IGNORE-INSTALLED"),
            valued({"--trusted-host"}, "SC-PIP-F-TRUSTED-HOST"),
            valued({"--prefix"}, "SC-PIP-F-PREFIX"),
        };
        all.push_back(std::move(s));
    }
    {
        auto s = schema({"npm"}, "SC-NPM");
        s.subcommands = {
            sub({"install"}, "SC-NPM-INSTALL", "SC-NPM-PACKAGE"),
            sub({"i"}, "SC-NPM-INSTALL", "SC-NPM-PACKAGE"),
            sub({"ci"}, "SC-NPM-CI"),
            sub({"cache", "clean"}, "SC-NPM-CACHE-CLEAN"),
            sub({"run"}, "SC-NPM-RUN"),
            sub({"run-script"}, "SC-NPM-RUN"),
            sub({"update"}, "SC-NPM-UPDATE", "SC-NPM-PACKAGE"),
        };
        s.flags = {
            flag({"-f", "--force"}, "SC-NPM-F-FORCE"),
            flag({"-g", "--global"}, "SC-NPM-F-GLOBAL"),
            flag({"--production"}, "SC-NPM-F-PRODUCTION"),
            flag({"-S", "--save"}, "SC-NPM-F-SAVE"),
            flag({"-D", "--save-dev"}, "SC-NPM-F-SAVE-DEV"),
            flag({"-s", "--silent"}, "SC-NPM-F-SILENT"),
            flag({"--unsafe-perm"}, "SC-NPM-F-UNSAFE-PERM"),
            valued({"--loglevel"}, "SC-NPM-F-LOGLEVEL"),
            valued({"--registry"}, "SC-NPM-F-REGISTRY"),
            valued({"--prefix"}, "SC-NPM-F-PREFIX"),
            valued({"--omit"}, "SC-NPM-F-OMIT"),
            flag({"--legacy-peer-deps"}, "SC-NPM-F-LEGACY-PEER-DEPS"),
            flag({"-q", "--quiet"}, "SC-NPM-F-QUIET"),
        };
        all.push_back(std::move(s));
    }
    {
        auto s = schema({"npx"}, "SC-NPX");
        s.annotate_only = true;
        all.push_back(std::move(s));
    }
    {
        auto s = schema({"yarn", "yarnpkg"}, "SC-YARN");
        s.subcommands = {
            sub({"install"}, "SC-YARN-INSTALL"),
            sub({"add"}, "SC-YARN-ADD", "SC-YARN-PACKAGE"),
            sub({"cache", "clean"}, "SC-YARN-CACHE-CLEAN"),
            sub({"run"}, "SC-YARN-RUN"),
        };
        s.default_subcommand_label = Label::of("SC-YARN-INSTALL");
        s.flags = {
            flag({"--frozen-lockfile"}, "SC-YARN-F-FROZEN-LOCKFILE"),
            flag({"--production", "--prod"}, "SC-YARN-F-PRODUCTION"),
            flag({"--pure-lockfile"}, "SC-YARN-F-PURE-LOCKFILE"),
            valued({"--network-timeout"}, "SC-YARN-F-NETWORK-TIMEOUT"),
            flag({"--ignore-engines"}, "SC-YARN-F-IGNORE-ENGINES"),
            flag({"--non-interactive"}, "SC-YARN-F-NON-INTERACTIVE"),
            flag({"-s", "--silent"}, "SC-YARN-F-SILENT"),
            valued({"--cwd"}, "SC-YARN-F-CWD"),
            flag({"--immutable"}, "SC-YARN-F-IMMUTABLE"),
            flag({"--prefer-offline"}, "SC-YARN-F-PREFER-OFFLINE"),
            flag({"--ignore-scripts"}, "SC-YARN-F-IGNORE-SCRIPTS"),
        };
        all.push_back(std::move(s));
    }
    {
        auto s = schema({"gem"}, "SC-GEM");
        s.subcommands = {
            sub({"install"}, "SC-GEM-INSTALL", "SC-GEM-PACKAGE"),
            sub({"update"}, "SC-GEM-UPDATE", "SC-GEM-PACKAGE"),
            sub({"uninstall"}, "SC-GEM-UNINSTALL", "SC-GEM-PACKAGE"),
        };
        s.flags = {
            flag({"--system"}, "SC-GEM-F-SYSTEM"),
            flag({"-N", "--no-document"}, "SC-GEM-F-NO-DOCUMENT"),
            flag({"--no-rdoc"}, "SC-GEM-F-NO-RDOC"),
            flag({"--no-ri"}, "SC-GEM-F-NO-RI"),
            valued({"-v", "--version"}, "SC-GEM-F-VERSION"),
            flag({"--user-install"}, "SC-GEM-F-USER-INSTALL"),
            valued({"-i", "--install-dir"}, "SC-GEM-F-INSTALL-DIR"),
            valued({"-n", "--bindir"}, "SC-GEM-F-BINDIR"),
            valued({"-s", "--source"}, "SC-GEM-F-SOURCE"),
            flag({"-q", "--quiet"}, "SC-GEM-F-QUIET"),
        };
        all.push_back(std::move(s));
    }
    {
        auto s = schema({"yum", "dnf", "microdnf"}, "SC-YUM");
        s.subcommands = {
            sub({"install"}, "SC-YUM-INSTALL", "SC-YUM-PACKAGE"),
            sub({"update"}, "SC-YUM-UPDATE", "SC-YUM-PACKAGE"),
            sub({"upgrade"}, "SC-YUM-UPDATE", "SC-YUM-PACKAGE"),
            sub({"remove"}, "SC-YUM-REMOVE", "SC-YUM-PACKAGE"),
            sub({"erase"}, "SC-YUM-REMOVE", "SC-YUM-PACKAGE"),
            sub({"clean"}, "SC-YUM-CLEAN"),
            sub({"groupinstall"}, "SC-YUM-GROUPINSTALL", "SC-YUM-PACKAGE"),
        };
        s.flags = {
            flag({"-y", "--assumeyes"}, "SC-YUM-F-ASSUMEYES"),
            flag({"-q", "--quiet"}, "SC-YUM-F-QUIET"),
            valued({"--setopt"}, "SC-YUM-F-SETOPT"),
            valued({"--enablerepo"}, "SC-YUM-F-ENABLEREPO"),
            valued({"--disablerepo"}, "SC-YUM-F-DISABLEREPO"),
            flag({"--nogpgcheck"}, "SC-YUM-F-NOGPGCHECK"),
            flag({"--skip-broken"}, "SC-YUM-F-SKIP-BROKEN"),
            flag({"--nodocs"}, "SC-YUM-F-NODOCS"),
            valued({"--installroot"}, "SC-YUM-F-INSTALLROOT"),
            valued({"--releasever"}, "SC-YUM-F-RELEASEVER"),
            flag({"--allowerasing"}, "SC-YUM-F-ALLOWERASING"),
            valued({"-x", "--exclude"}, "SC-YUM-F-EXCLUDE"),
        };
        all.push_back(std::move(s));
    }
    {
        auto s = schema({"tar", "gtar", "bsdtar"}, "SC-TAR");
        s.bundled_first_arg = true;
        s.positional_label = Label::of("SC-TAR-MEMBER");
        s.flags = {
            flag({"-x", "--extract", "--get"}, "SC-TAR-EXTRACT"),
            flag({"-c", "--create"}, "SC-TAR-F-CREATE"),
            flag({"-t", "--list"}, "SC-TAR-F-LIST"),
            valued({"-f", "--file"}, "SC-TAR-F-FILE", "SC-TAR-ARCHIVE"),
            flag({"-z", "--gzip", "--gunzip", "--ungzip"}, "SC-TAR-F-GZIP"),
            flag({"-j", "--bzip2"}, "SC-TAR-F-BZIP2"),
            flag({"-J", "--xz"}, "SC-TAR-F-XZ"),
            flag({"--zstd"}, "SC-TAR-F-ZSTD"),
            flag({"-v", "--verbose"}, "SC-TAR-F-VERBOSE"),
            valued({"-C", "--directory"}, "SC-TAR-F-DIRECTORY"),
            valued({"--strip-components", "--strip"}, "SC-TAR-F-STRIP-COMPONENTS"),
            flag({"--no-same-owner"}, "SC-TAR-F-NO-SAME-OWNER"),
            valued({"--exclude"}, "SC-TAR-F-EXCLUDE"),
            flag({"-p", "--preserve-permissions", "--same-permissions"},
                 "SC-TAR-F-PRESERVE-PERMISSIONS"),
            flag({"-O", "--to-stdout"}, "SC-TAR-F-TO-STDOUT"),
        };
        all.push_back(std::move(s));
    }
    {
        auto s = schema({"mkdir"}, "SC-MKDIR");
        s.positional_label = Label::of("SC-MKDIR-PATH");
        s.flags = {
            flag({"-p", "--parents"}, "SC-MKDIR-F-PARENTS"),
            valued({"-m", "--mode"}, "SC-MKDIR-F-MODE"),
            flag({"-v", "--verbose"}, "SC-MKDIR-F-VERBOSE"),
        };
        all.push_back(std::move(s));
    }
    {
        auto s = schema({"rm"}, "SC-RM");
        s.positional_label = Label::of("SC-RM-PATH");
        s.flags = {
            flag({"-r", "-R", "--recursive"}, "SC-RM-F-RECURSIVE"),
            flag({"-f", "--force"}, "SC-RM-F-FORCE"),
            flag({"-v", "--verbose"}, "SC-RM-F-VERBOSE"),
            flag({"-d", "--dir"}, "SC-RM-F-DIR"),
        };
        all.push_back(std::move(s));
    }
    {
        auto s = schema({"mktemp"}, "SC-MKTEMP");
        s.positional_label = Label::of("SC-MKTEMP-TEMPLATE");
        s.flags = {
            flag({"-d", "--directory"}, "SC-MKTEMP-D"),
            flag({"-u", "--dry-run"}, "SC-MKTEMP-F-DRY-RUN"),
            flag({"-q", "--quiet"}, "SC-MKTEMP-F-QUIET"),
            valued({"-p"}, "SC-MKTEMP-F-TMPDIR"),
            flag({"--tmpdir", "-t"}, "SC-MKTEMP-F-TMPDIR"),
            valued({"--suffix"}, "SC-MKTEMP-F-SUFFIX"),
        };
        all.push_back(std::move(s));
    }
    {
        auto s = schema({"gpg", "gpg2"}, "SC-GPG");
        s.positional_label = Label::of("SC-GPG-ARG");
        s.flags = {
            flag({"--verify"}, "SC-GPG-F-VERIFY"),
            flag({"--batch"}, "SC-GPG-F-BATCH"),
            valued({"--keyserver"}, "SC-GPG-F-KEYSERVER"),
            flag({"--recv-keys", "--recv-key"}, "SC-GPG-F-RECV-KEYS"),
            flag({"--import"}, "SC-GPG-F-IMPORT"),
            flag({"--dearmor"}, "SC-GPG-F-DEARMOR"),
            valued({"-o", "--output"}, "SC-GPG-F-OUTPUT"),
            valued({"--homedir"}, "SC-GPG-F-HOMEDIR"),
            flag({"--no-tty"}, "SC-GPG-F-NO-TTY"),
            flag({"-q", "--quiet"}, "SC-GPG-F-QUIET"),
            flag({"--yes"}, "SC-GPG-F-YES"),
            flag({"--fingerprint"}, "SC-GPG-F-FINGERPRINT"),
            flag({"--export"}, "SC-GPG-F-EXPORT"),
            valued({"--keyserver-options"}, "SC-GPG-F-KEYSERVER-OPTIONS"),
        };
        all.push_back(std::move(s));
    }
    {
        auto s = schema({"wget"}, "SC-WGET");
        s.positional_label = Label::of("SC-WGET-URL");
        s.flags = {
            valued({"-O", "--output-document"}, "SC-WGET-F-OUTPUT-DOCUMENT", "SC-WGET-OUTPUT"),
            flag({"-q", "--quiet"}, "SC-WGET-F-QUIET"),
            flag({"-nv", "--no-verbose"}, "SC-WGET-F-NO-VERBOSE"),
            flag({"--no-check-certificate"}, "SC-WGET-F-NO-CHECK-CERTIFICATE"),
            valued({"-P", "--directory-prefix"}, "SC-WGET-F-DIRECTORY-PREFIX"),
            valued({"--progress"}, "SC-WGET-F-PROGRESS"),
            flag({"-c", "--continue"}, "SC-WGET-F-CONTINUE"),
            valued({"--header"}, "SC-WGET-F-HEADER"),
            valued({"-t", "--tries"}, "SC-WGET-F-TRIES"),
            valued({"-T", "--timeout"}, "SC-WGET-F-TIMEOUT"),
        };
        all.push_back(std::move(s));
    }
    {
        auto s = schema({"curl"}, "SC-CURL");
        s.positional_label = Label::of("SC-CURL-URL");
        s.flags = {
            valued({"-o", "--output"}, "SC-CURL-F-OUTPUT", "SC-CURL-OUTPUT"),
            flag({"-O", "--remote-name"}, "SC-CURL-F-REMOTE-NAME"),
            flag({"-L", "--location"}, "SC-CURL-F-LOCATION"),
            flag({"-s", "--silent"}, "SC-CURL-F-SILENT"),
            flag({"-S", "--show-error"}, "SC-CURL-F-SHOW-ERROR"),
            flag({"-f", "--fail"}, "SC-CURL-F-FAIL"),
            flag({"-k", "--insecure"}, "SC-CURL-F-INSECURE"),
            valued({"-H", "--header"}, "SC-CURL-F-HEADER"),
            valued({"-X", "--request"}, "SC-CURL-F-REQUEST"),
            valued({"-d", "--data", "--data-raw", "--data-binary"}, "SC-CURL-F-DATA"),
            valued({"--retry"}, "SC-CURL-F-RETRY"),
            valued({"-w", "--write-out"}, "SC-CURL-F-WRITE-OUT"),
            valued({"-u", "--user"}, "SC-CURL-F-USER"),
            valued({"-x", "--proxy"}, "SC-CURL-F-PROXY"),
            valued({"--connect-timeout"}, "SC-CURL-F-CONNECT-TIMEOUT"),
            valued({"-m", "--max-time"}, "SC-CURL-F-MAX-TIME"),
            flag({"--compressed"}, "SC-CURL-F-COMPRESSED"),
            flag({"--create-dirs"}, "SC-CURL-F-CREATE-DIRS"),
            valued({"--proto"}, "SC-CURL-F-PROTO"),
            valued({"-A", "--user-agent"}, "SC-CURL-F-USER-AGENT"),
            flag({"-I", "--head"}, "SC-CURL-F-HEAD"),
            flag({"-v", "--verbose"}, "SC-CURL-F-VERBOSE"),
        };
        all.push_back(std::move(s));
    }
    {
        auto s = schema({"cd"}, "SC-CD");
        s.positional_label = Label::of("SC-CD-PATH");
        all.push_back(std::move(s));
    }
    {
        auto s = schema({"echo"}, "SC-ECHO");
        s.positional_label = Label::of("SC-ECHO-ARG");
        s.flags = {
            flag({"-n"}, "SC-ECHO-F-NO-NEWLINE"),
            flag({"-e", "-E"}, "SC-ECHO-F-ESCAPES"),
        };
        all.push_back(std::move(s));
    }
    {
        auto s = schema({"printf"}, "SC-PRINTF");
        s.positional_label = Label::of("SC-PRINTF-ARG");
        all.push_back(std::move(s));
    }
    return all;
}

// pip3.11, pip2.7, ...
bool is_versioned_pip(std::string_view name) {
    if (name.substr(0, 3) != "pip" || name.size() == 3) {
        return false;
    }
    return std::all_of(name.begin() + 3, name.end(), [](char c) {
        return std::isdigit(static_cast<unsigned char>(c)) != 0 || c == '.';
    });
}

}  // namespace

const FlagSpec* CommandSchema::flag(std::string_view spelling) const {
    for (const auto& f : flags) {
        if (std::find(f.spellings.begin(), f.spellings.end(), spelling) != f.spellings.end()) {
            return &f;
        }
    }
    return nullptr;
}

SchemaRegistry::SchemaRegistry() : schemas_(build_schemas()) {
    for (const auto& s : schemas_) {
        for (const auto& f : s.flags) {
            for (const auto& sp : f.spellings) {
                if (sp.empty() || sp.front() != '-') {
                    throw ConfigError("flag spelling '" + sp + "' of " + s.names.front() +
                                      " must start with '-'");
                }
            }
        }
    }
}

const SchemaRegistry& SchemaRegistry::builtin() {
    static const SchemaRegistry registry;
    return registry;
}

const CommandSchema* SchemaRegistry::lookup(std::string_view command) const {
    if (command.empty() || command.find('$') != std::string_view::npos ||
        command.find('`') != std::string_view::npos) {
        return nullptr;
    }
    if (command.front() == '/') {
        command = command.substr(command.rfind('/') + 1);
    }
    if (is_versioned_pip(command)) {
        command = "pip";
    }
    for (const auto& s : schemas_) {
        if (std::find(s.names.begin(), s.names.end(), command) != s.names.end()) {
            return &s;
        }
    }
    return nullptr;
}

}  // namespace dockslim
