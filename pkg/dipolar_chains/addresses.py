# Copyright (C) 2019 by the dipolar-chains developers
#
# Licensed under the Apache License, Version 2.0 (the "License"); you
# may not use this file except in compliance with the License. You may
# obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
# implied. See the License for the specific language governing
# permissions and limitations under the License.


class ConfigAddress(object):
    """
    Represent an "address" in a configuration file.  An address is a
    filename, an optional line number, and a path through the file to
    a particular configuration item.  The path consists of
    bracket-enclosed section names and "/"-separated keys; for
    example, the "theta" key of the "energy-sweep" section on line 4
    of "sweep.ini" would be rendered as
    "sweep.ini:4:/[energy-sweep]/theta".

    Note that a ``ConfigAddress`` instance is immutable; to obtain
    addresses that contain additional sections, keys or a line number,
    use the ``section()``, ``key()`` and ``line()`` methods to return
    new ``ConfigAddress`` instances.
    """

    def __init__(self, filename, path='', lineno=None):
        """
        Initialize a ``ConfigAddress`` instance.

        :param str filename: The name of the file.
        :param str path: An optional initial path.
        :param int lineno: An optional line number.
        """

        self.filename = filename
        self.path = path
        self.lineno = lineno

    def __str__(self):
        """
        Return a string representation of the address.

        :returns: The filename, line number if known, and path,
                  separated by ":".
        :rtype: ``str``
        """

        if self.lineno is None:
            return '%s:%s' % (self.filename, self.path)

        return '%s:%d:%s' % (self.filename, self.lineno, self.path)

    def section(self, name):
        """
        Construct a new address with an additional section.

        :param str name: The section name to add to the path.

        :returns: The new address.
        :rtype: ``ConfigAddress``
        """

        return self.__class__(
            self.filename, self.path + '/[%s]' % name, self.lineno,
        )

    def key(self, key):
        """
        Construct a new address with an additional key.

        :param str key: The key to add to the path.

        :returns: The new address.
        :rtype: ``ConfigAddress``
        """

        return self.__class__(
            self.filename, self.path + '/%s' % key, self.lineno,
        )

    def line(self, lineno):
        """
        Construct a new address pointing at a given line.

        :param int lineno: The line number.

        :returns: The new address.
        :rtype: ``ConfigAddress``
        """

        return self.__class__(self.filename, self.path, lineno)
